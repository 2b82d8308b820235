#include "geomwork/geometry.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "geomwork/csv.hpp"
#include "geomwork/errors.hpp"
#include "geomwork/parallel.hpp"

namespace geomwork {

Eigen::VectorXd one_form_components(const LindbladModel& model, const ControlPoint& lambda,
                                    const ComplexMatrix& rho) {
    const std::size_t n = model.hamiltonian.n_params();
    Eigen::VectorXd a(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const Complex tr = (rho * model.hamiltonian.grad(lambda, i)).trace();
        if (std::abs(tr.imag()) > 1e-10) {
            std::ostringstream os;
            os << "work one-form component " << i << " has imaginary part " << tr.imag();
            throw Error(os.str());
        }
        a[static_cast<Eigen::Index>(i)] = tr.real();
    }
    return a;
}

OneFormSample work_one_form(const LindbladModel& model, const ControlPoint& lambda) {
    const DensityMatrix rho = steady_state(model, lambda);
    return {lambda, one_form_components(model, lambda, rho.mat())};
}

double curvature_closed_form_tls(double delta, double omega, double gamma, double gamma_phi) {
    if (!(gamma > 0.0)) throw InvalidParameters("closed-form curvature needs gamma > 0");
    const double g2 = tls_gamma2(gamma, gamma_phi);
    const double D = tls_denominator(delta, omega, gamma, gamma_phi);
    if (D == 0.0) throw InvalidParameters("closed-form curvature: D = 0");
    const double num = 2.0 * gamma_phi * delta * delta +
                       g2 * (2.0 * g2 * g2 + g2 * gamma + 4.0 * omega * omega);
    return -2.0 * omega * gamma * num / (D * D);
}

double default_fd_step(double coordinate) { return 1e-3 * std::max(1.0, std::abs(coordinate)); }

namespace {

// [A_j(λ + h_i e_i) − A_j(λ − h_i e_i)] / (2 h_i)
double partial(const LindbladModel& model, const ControlPoint& lambda, std::size_t i,
               std::size_t j, double hi) {
    const auto plus = work_one_form(model, lambda.shifted(i, hi));
    const auto minus = work_one_form(model, lambda.shifted(i, -hi));
    const auto jj = static_cast<Eigen::Index>(j);
    return (plus.components[jj] - minus.components[jj]) / (2.0 * hi);
}

double curvature_fd_steps(const LindbladModel& model, const ControlPoint& lambda,
                          std::size_t i, std::size_t j, double hi, double hj) {
    const std::size_t n = model.hamiltonian.n_params();
    if (i >= n || j >= n) throw std::out_of_range("curvature_fd: parameter index out of range");
    if (!(hi > 0.0) || !(hj > 0.0)) throw InvalidParameters("curvature_fd: step must be > 0");
    if (i == j) return 0.0;
    return partial(model, lambda, i, j, hi) - partial(model, lambda, j, i, hj);
}

} // namespace

double curvature_fd(const LindbladModel& model, const ControlPoint& lambda, std::size_t i,
                    std::size_t j, double h) {
    return curvature_fd_steps(model, lambda, i, j, h, h);
}

double curvature_fd(const LindbladModel& model, const ControlPoint& lambda, std::size_t i,
                    std::size_t j) {
    const double hi = i < lambda.size() ? default_fd_step(lambda[i]) : 1e-3;
    const double hj = j < lambda.size() ? default_fd_step(lambda[j]) : 1e-3;
    return curvature_fd_steps(model, lambda, i, j, hi, hj);
}

double coherence(double x, double y) { return 0.5 * std::hypot(x, y); }

double GridAxis::at(std::size_t k) const {
    if (k + 1 == count) return max;
    return min + spacing() * static_cast<double>(k);
}

void GridSpec::validate() const {
    for (const GridAxis* a : {&lambda1, &lambda2}) {
        if (a->count < 2) throw InvalidParameters("grid axis count must be >= 2");
        if (!(a->max > a->min) || !std::isfinite(a->min) || !std::isfinite(a->max)) {
            throw InvalidParameters("grid axis needs finite max > min");
        }
    }
}

std::string to_string(CurvatureMethod m) {
    return m == CurvatureMethod::closed_form ? "closed_form" : "finite_difference";
}

CurvatureMethod curvature_method_from_string(const std::string& s) {
    if (s == "closed_form") return CurvatureMethod::closed_form;
    if (s == "finite_difference") return CurvatureMethod::finite_difference;
    throw InvalidParameters("unknown curvature method '" + s + "'");
}

CurvatureField curvature_field(const LindbladModel& model, const GridSpec& grid,
                               CurvatureMethod method, std::optional<double> h,
                               std::size_t threads) {
    grid.validate();
    if (model.hamiltonian.n_params() != 2) {
        throw InvalidParameters("curvature fields need a two-parameter model");
    }
    if (method == CurvatureMethod::closed_form && !model.tls) {
        throw InvalidParameters("closed-form curvature is only available for the TLS model");
    }
    if (h && !(*h > 0.0)) throw InvalidParameters("finite-difference step must be > 0");

    CurvatureField field;
    field.grid = grid;
    field.method = method;
    field.h = method == CurvatureMethod::finite_difference ? h : std::nullopt;
    field.model_name = model.name;
    field.model_params = model.params;

    const std::size_t n1 = grid.lambda1.count;
    const std::size_t total = grid.size();
    field.values.assign(total, std::nullopt);
    std::vector<std::string> errors(total);

    parallel_for(total, threads, [&](std::size_t idx) {
        const double l1 = grid.lambda1.at(idx % n1);
        const double l2 = grid.lambda2.at(idx / n1);
        try {
            if (method == CurvatureMethod::closed_form) {
                field.values[idx] =
                    curvature_closed_form_tls(l1, l2, model.tls->gamma, model.tls->gamma_phi);
            } else if (h) {
                field.values[idx] = curvature_fd(model, ControlPoint{l1, l2}, 0, 1, *h);
            } else {
                field.values[idx] = curvature_fd(model, ControlPoint{l1, l2}, 0, 1);
            }
        } catch (const Error& e) {
            std::ostringstream os;
            os << "(" << csv::format_double(l1) << ", " << csv::format_double(l2)
               << "): " << e.what();
            errors[idx] = os.str();
        }
    });
    for (auto& e : errors) {
        if (!e.empty()) field.failures.push_back(std::move(e));
    }
    return field;
}

std::optional<FieldMaximum> max_abs(const CurvatureField& field) {
    std::optional<FieldMaximum> best;
    const std::size_t n1 = field.grid.lambda1.count;
    for (std::size_t idx = 0; idx < field.values.size(); ++idx) {
        const auto& v = field.values[idx];
        if (!v) continue;
        if (!best || std::abs(*v) > std::abs(best->value)) {
            const std::size_t i1 = idx % n1;
            const std::size_t i2 = idx / n1;
            best = FieldMaximum{i1, i2, field.grid.lambda1.at(i1), field.grid.lambda2.at(i2), *v};
        }
    }
    return best;
}

std::string field_csv(const CurvatureField& field) {
    csv::Writer w{"lambda1", "lambda2", "F"};
    const std::size_t n1 = field.grid.lambda1.count;
    for (std::size_t idx = 0; idx < field.values.size(); ++idx) {
        w.cell(field.grid.lambda1.at(idx % n1))
            .cell(field.grid.lambda2.at(idx / n1))
            .cell(field.values[idx]);
        w.end_row();
    }
    return w.str();
}

std::string field_metadata_json(const CurvatureField& field) {
    auto axis = [](const GridAxis& a) {
        return nlohmann::ordered_json{{"min", a.min}, {"max", a.max}, {"count", a.count}};
    };
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& [k, v] : field.model_params) params[k] = v;
    nlohmann::ordered_json j{
        {"model", field.model_name},
        {"model_params", params},
        {"method", to_string(field.method)},
        {"h", field.h ? nlohmann::ordered_json(*field.h) : nlohmann::ordered_json(nullptr)},
        {"grid", {{"lambda1", axis(field.grid.lambda1)}, {"lambda2", axis(field.grid.lambda2)}}},
        {"layout", "row-major, lambda2 outer"},
        {"missing_nodes", field.failures.size()},
    };
    return j.dump(2) + "\n";
}

} // namespace geomwork
