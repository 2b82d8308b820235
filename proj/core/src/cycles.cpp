#include "geomwork/cycles.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "geomwork/csv.hpp"
#include "geomwork/errors.hpp"
#include "geomwork/parallel.hpp"
#include "geomwork/quadrature.hpp"

namespace geomwork {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t segment_of(double s, std::size_t segments) {
    if (segments == 1) return 0;
    const auto k = static_cast<std::size_t>(std::floor(s * static_cast<double>(segments)));
    return std::min(k, segments - 1);
}

ControlPoint to_point(const Eigen::Vector2d& v) { return ControlPoint{v[0], v[1]}; }

} // namespace

Cycle::Cycle(Kind kind, Eigen::Vector2d a, Eigen::Vector2d b, Orientation o)
    : kind_(kind), a_(std::move(a)), b_(std::move(b)), orientation_(o) {
    if (!a_.allFinite() || !b_.allFinite()) throw InvalidParameters("cycle has non-finite data");
}

Cycle Cycle::circle(Eigen::Vector2d center, Eigen::Vector2d radii, Orientation orientation) {
    if (radii[0] < 0.0 || radii[1] < 0.0) throw InvalidParameters("circle radii must be >= 0");
    return Cycle(Kind::circle, std::move(center), std::move(radii), orientation);
}

Cycle Cycle::rectangle(Eigen::Vector2d lo, Eigen::Vector2d hi, Orientation orientation) {
    if (hi[0] < lo[0] || hi[1] < lo[1]) {
        throw InvalidParameters("rectangle needs hi >= lo componentwise");
    }
    return Cycle(Kind::rectangle, std::move(lo), std::move(hi), orientation);
}

double Cycle::breakpoint(std::size_t k) const {
    if (k > segments()) throw std::out_of_range("cycle breakpoint index");
    return static_cast<double>(k) / static_cast<double>(segments());
}

Eigen::Vector2d Cycle::base_position(double s) const {
    if (kind_ == Kind::circle) {
        const double th = kTwoPi * s;
        return a_ + Eigen::Vector2d(b_[0] * std::cos(th), b_[1] * std::sin(th));
    }
    const Eigen::Vector2d corners[5] = {a_, {b_[0], a_[1]}, b_, {a_[0], b_[1]}, a_};
    if (s >= 1.0) return a_;
    const std::size_t k = segment_of(s, 4);
    const double u = 4.0 * s - static_cast<double>(k);
    return corners[k] + u * (corners[k + 1] - corners[k]);
}

Eigen::Vector2d Cycle::base_velocity(double s, std::size_t segment) const {
    if (kind_ == Kind::circle) {
        const double th = kTwoPi * s;
        return kTwoPi * Eigen::Vector2d(-b_[0] * std::sin(th), b_[1] * std::cos(th));
    }
    const Eigen::Vector2d corners[5] = {a_, {b_[0], a_[1]}, b_, {a_[0], b_[1]}, a_};
    return 4.0 * (corners[segment + 1] - corners[segment]);
}

ControlPoint Cycle::position(double s) const {
    return to_point(base_position(orientation_ == Orientation::positive ? s : 1.0 - s));
}

Eigen::Vector2d Cycle::velocity(double s, std::size_t segment) const {
    if (segment >= segments()) throw std::out_of_range("cycle segment index");
    if (orientation_ == Orientation::positive) return base_velocity(s, segment);
    return -base_velocity(1.0 - s, segments() - 1 - segment);
}

Eigen::Vector2d Cycle::velocity(double s) const {
    return velocity(s, segment_of(s, segments()));
}

double Cycle::signed_area() const {
    const double sign = orientation_ == Orientation::positive ? 1.0 : -1.0;
    if (kind_ == Kind::circle) return sign * std::numbers::pi * b_[0] * b_[1];
    return sign * (b_[0] - a_[0]) * (b_[1] - a_[1]);
}

Cycle reverse(const Cycle& cycle) {
    const Orientation o = cycle.orientation() == Orientation::positive ? Orientation::negative
                                                                       : Orientation::positive;
    return cycle.kind() == Cycle::Kind::circle ? Cycle::circle(cycle.first(), cycle.second(), o)
                                               : Cycle::rectangle(cycle.first(), cycle.second(), o);
}

namespace {

Eigen::Vector2d pair_from(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) throw InvalidParameters(std::string("cycle: missing '") + key + "'");
    const auto& v = j.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw InvalidParameters(std::string("cycle: '") + key + "' must be [number, number]");
    }
    return {v[0].get<double>(), v[1].get<double>()};
}

} // namespace

Cycle cycle_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidParameters(std::string("cycle: ") + e.what());
    }
    if (!j.is_object()) throw InvalidParameters("cycle: expected a JSON object");
    Orientation o = Orientation::positive;
    if (j.contains("orientation")) {
        const auto& oj = j.at("orientation");
        if (oj == "positive") {
            o = Orientation::positive;
        } else if (oj == "negative") {
            o = Orientation::negative;
        } else {
            throw InvalidParameters("cycle: orientation must be \"positive\" or \"negative\"");
        }
    }
    if (!j.contains("kind") || !j.at("kind").is_string()) {
        throw InvalidParameters("cycle: missing string 'kind'");
    }
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "circle") return Cycle::circle(pair_from(j, "center"), pair_from(j, "radii"), o);
    if (kind == "rectangle") return Cycle::rectangle(pair_from(j, "lo"), pair_from(j, "hi"), o);
    throw InvalidParameters("cycle: unknown kind '" + kind + "'");
}

std::string cycle_to_json(const Cycle& cycle) {
    nlohmann::ordered_json j;
    const auto& a = cycle.first();
    const auto& b = cycle.second();
    if (cycle.kind() == Cycle::Kind::circle) {
        j = {{"kind", "circle"}, {"center", {a[0], a[1]}}, {"radii", {b[0], b[1]}}};
    } else {
        j = {{"kind", "rectangle"}, {"lo", {a[0], a[1]}}, {"hi", {b[0], b[1]}}};
    }
    j["orientation"] = cycle.orientation() == Orientation::positive ? "positive" : "negative";
    return j.dump();
}

Cycle default_loop(char id) {
    switch (id) {
    case 'A': return Cycle::circle({2.5, 0.6}, {0.4, 0.3});
    case 'B': return Cycle::circle({0.0, 0.6}, {0.4, 0.3});
    case 'C': return Cycle::circle({0.8, 0.0}, {0.3, 0.4});
    default: throw InvalidParameters(std::string("unknown default loop '") + id + "'");
    }
}

std::vector<PathNode> path_nodes(const Cycle& cycle, std::size_t n) {
    if (n < 8) throw InvalidParameters("path quadrature needs n >= 8");
    std::vector<PathNode> nodes;
    if (cycle.segments() == 1) {
        nodes.reserve(n);
        const double w = 1.0 / static_cast<double>(n);
        for (std::size_t k = 0; k < n; ++k) {
            nodes.push_back({static_cast<double>(k) * w, w, 0});
        }
        return nodes;
    }
    const std::size_t per = std::max<std::size_t>(2, n / cycle.segments());
    for (std::size_t seg = 0; seg < cycle.segments(); ++seg) {
        const auto rule = trapezoid(per, cycle.breakpoint(seg), cycle.breakpoint(seg + 1));
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
            nodes.push_back({rule.nodes[k], rule.weights[k], seg});
        }
    }
    return nodes;
}

namespace {

// Per-node integrand A(λ(s)) · dλ/ds.
std::vector<double> one_form_along(const LindbladModel& model, const Cycle& cycle,
                                   const std::vector<PathNode>& nodes, std::size_t threads) {
    std::vector<double> f(nodes.size());
    parallel_for(nodes.size(), threads, [&](std::size_t k) {
        const auto& node = nodes[k];
        const ControlPoint p = cycle.position(node.s);
        const Eigen::Vector2d v = cycle.velocity(node.s, node.segment);
        if (v.squaredNorm() == 0.0) {
            f[k] = 0.0;
            return;
        }
        try {
            const auto a = work_one_form(model, p);
            f[k] = a.components.head<2>().dot(v);
        } catch (const Error& e) {
            std::ostringstream os;
            os << "steady state failed at path sample " << k << " (s=" << node.s << ", lambda=("
               << p[0] << ", " << p[1] << ")): " << e.what();
            throw Error(os.str());
        }
    });
    return f;
}

} // namespace

double line_integral_work(const LindbladModel& model, const Cycle& cycle, std::size_t n,
                          std::size_t threads) {
    if (model.hamiltonian.n_params() != 2) {
        throw InvalidParameters("cycle work needs a two-parameter model");
    }
    const auto nodes = path_nodes(cycle, n);
    const auto f = one_form_along(model, cycle, nodes, threads);
    double sum = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) sum += nodes[k].weight * f[k];
    return sum;
}

double flux_work(const LindbladModel& model, const Cycle& cycle, std::size_t m,
                 const FluxOptions& opts) {
    if (m < 4) throw InvalidParameters("flux quadrature needs m >= 4");
    if (model.hamiltonian.n_params() != 2) {
        throw InvalidParameters("cycle work needs a two-parameter model");
    }
    if (opts.method == CurvatureMethod::closed_form && !model.tls) {
        throw InvalidParameters("closed-form curvature is only available for the TLS model");
    }
    const double sign = cycle.orientation() == Orientation::positive ? 1.0 : -1.0;
    const Eigen::Vector2d& a = cycle.first();
    const Eigen::Vector2d& b = cycle.second();

    const bool is_circle = cycle.kind() == Cycle::Kind::circle;
    if (is_circle ? (b[0] == 0.0 || b[1] == 0.0) : (b[0] == a[0] || b[1] == a[1])) return 0.0;

    const QuadratureRule outer = is_circle ? gauss_legendre(m, 0.0, 1.0) : gauss_legendre(m, a[0], b[0]);
    const QuadratureRule inner =
        is_circle ? gauss_legendre(m, 0.0, 2.0 * std::numbers::pi) : gauss_legendre(m, a[1], b[1]);

    auto curvature = [&](double l1, double l2) {
        if (opts.method == CurvatureMethod::closed_form) {
            return curvature_closed_form_tls(l1, l2, model.tls->gamma, model.tls->gamma_phi);
        }
        const ControlPoint p{l1, l2};
        return opts.h ? curvature_fd(model, p, 0, 1, *opts.h) : curvature_fd(model, p, 0, 1);
    };

    std::vector<double> g(m * m);
    parallel_for(m * m, opts.threads, [&](std::size_t idx) {
        const std::size_t io = idx / m;
        const std::size_t ii = idx % m;
        double l1 = outer.nodes[io];
        double l2 = inner.nodes[ii];
        double jac = 1.0;
        if (is_circle) {
            const double r = outer.nodes[io];
            const double th = inner.nodes[ii];
            l1 = a[0] + b[0] * r * std::cos(th);
            l2 = a[1] + b[1] * r * std::sin(th);
            jac = b[0] * b[1] * r;
        }
        try {
            g[idx] = outer.weights[io] * inner.weights[ii] * jac * curvature(l1, l2);
        } catch (const Error& e) {
            std::ostringstream os;
            os << "curvature failed at flux node (" << l1 << ", " << l2 << "): " << e.what();
            throw Error(os.str());
        }
    });
    double sum = 0.0;
    for (double v : g) sum += v;
    return sign * sum;
}

WorkResult cycle_work(const LindbladModel& model, const Cycle& cycle, std::size_t n,
                      std::size_t m, const FluxOptions& opts) {
    WorkResult r;
    r.w_line = line_integral_work(model, cycle, n, opts.threads);
    r.w_flux = flux_work(model, cycle, m, opts);
    r.stokes_residual = std::abs(r.w_line - r.w_flux);
    r.n_path = n;
    r.n_quad = m;
    return r;
}

std::string work_result_csv_header() { return "w_line,w_flux,stokes_residual,n_path,n_quad\n"; }

std::string work_result_csv_row(const WorkResult& r) {
    return csv::format_double(r.w_line) + "," + csv::format_double(r.w_flux) + "," +
           csv::format_double(r.stokes_residual) + "," + std::to_string(r.n_path) + "," +
           std::to_string(r.n_quad) + "\n";
}

double gauge_shift_residual(const LindbladModel& model, const Cycle& cycle,
                            const ScalarField& chi, std::size_t n) {
    if (!chi.gradient) throw InvalidParameters("gauge field needs an analytic gradient");
    const auto nodes = path_nodes(cycle, n);
    const auto f = one_form_along(model, cycle, nodes, 1);
    double plain = 0.0;
    double shifted = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        const auto& node = nodes[k];
        const Eigen::VectorXd grad = chi.gradient(cycle.position(node.s));
        const double dchi = grad.head<2>().dot(cycle.velocity(node.s, node.segment));
        plain += node.weight * f[k];
        shifted += node.weight * (f[k] + dchi);
    }
    return std::abs(shifted - plain);
}

} // namespace geomwork
