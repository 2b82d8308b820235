// geometry.hpp — work one-form, curvature two-form and grid-sampled curvature
// fields over a two-parameter control space.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "geomwork/operators.hpp"
#include "geomwork/steadystate.hpp"

namespace geomwork {

struct OneFormSample {
    ControlPoint point;
    Eigen::VectorXd components; // A_i, energy units
};

// A_i = Re Tr(ρ_ss(λ) ∂H/∂λ_i). Throws Error if any Im Tr exceeds 1e-10.
OneFormSample work_one_form(const LindbladModel& model, const ControlPoint& lambda);

// Same contraction for an arbitrary state (used along dynamical trajectories).
Eigen::VectorXd one_form_components(const LindbladModel& model, const ControlPoint& lambda,
                                    const ComplexMatrix& rho);

// F_ΔΩ of the driven two-level system, analytic.
double curvature_closed_form_tls(double delta, double omega, double gamma, double gamma_phi);

// 1e-3 · max(1, |λ_i|)
double default_fd_step(double coordinate);

// F_ij by central differences of the one-form with step h along both axes.
// Exactly antisymmetric in (i, j); zero for i == j.
double curvature_fd(const LindbladModel& model, const ControlPoint& lambda, std::size_t i,
                    std::size_t j, double h);
// Per-axis default steps.
double curvature_fd(const LindbladModel& model, const ControlPoint& lambda, std::size_t i,
                    std::size_t j);

// C = ½√(x² + y²)
double coherence(double x, double y);

struct GridAxis {
    double min = 0.0;
    double max = 1.0;
    std::size_t count = 2;

    double at(std::size_t k) const;
    double spacing() const { return (max - min) / static_cast<double>(count - 1); }
};

struct GridSpec {
    GridAxis lambda1;
    GridAxis lambda2;

    // Throws InvalidParameters unless count >= 2 and max > min on both axes.
    void validate() const;
    std::size_t size() const { return lambda1.count * lambda2.count; }
};

enum class CurvatureMethod { closed_form, finite_difference };

std::string to_string(CurvatureMethod m);
CurvatureMethod curvature_method_from_string(const std::string& s);

// F₁₂ sampled on a uniform grid. Storage is row-major with λ₂ as the row
// index: values[i2 * n1 + i1]. Nodes where the steady state failed hold
// nullopt.
struct CurvatureField {
    GridSpec grid;
    CurvatureMethod method = CurvatureMethod::closed_form;
    std::optional<double> h;
    std::string model_name;
    std::vector<std::pair<std::string, double>> model_params;
    std::vector<std::optional<double>> values;
    std::vector<std::string> failures;

    std::optional<double> at(std::size_t i1, std::size_t i2) const {
        return values[i2 * grid.lambda1.count + i1];
    }
};

struct FieldMaximum {
    std::size_t i1 = 0;
    std::size_t i2 = 0;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double value = 0.0;
};

// closed_form requires a TLS model. h == nullopt selects default_fd_step.
CurvatureField curvature_field(const LindbladModel& model, const GridSpec& grid,
                               CurvatureMethod method, std::optional<double> h = std::nullopt,
                               std::size_t threads = 1);

// Node of largest |F|; nullopt when every node failed.
std::optional<FieldMaximum> max_abs(const CurvatureField& field);

// Header `lambda1,lambda2,F`, missing values as empty cells.
std::string field_csv(const CurvatureField& field);
std::string field_metadata_json(const CurvatureField& field);

} // namespace geomwork
