// cycles.hpp — closed oriented paths in a two-parameter control space, cycle
// work as a line integral of the one-form and as a curvature flux.

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "geomwork/geometry.hpp"

namespace geomwork {

enum class Orientation { positive, negative };

// Circle (ellipse with semi-axes r₁, r₂) or axis-aligned rectangle, traversed
// once for s ∈ [0, 1]. Positive orientation is counterclockwise in (λ₁, λ₂).
// Circles start at center + (r₁, 0); rectangles start at the lower corner and
// spend s-length 1/4 on each side.
class Cycle {
public:
    enum class Kind { circle, rectangle };

    static Cycle circle(Eigen::Vector2d center, Eigen::Vector2d radii,
                        Orientation orientation = Orientation::positive);
    static Cycle rectangle(Eigen::Vector2d lo, Eigen::Vector2d hi,
                           Orientation orientation = Orientation::positive);

    Kind kind() const { return kind_; }
    Orientation orientation() const { return orientation_; }
    // circle: center / radii; rectangle: lower / upper corner
    const Eigen::Vector2d& first() const { return a_; }
    const Eigen::Vector2d& second() const { return b_; }

    ControlPoint position(double s) const;
    // dλ/ds. At a corner the value of the segment starting there is returned.
    Eigen::Vector2d velocity(double s) const;

    // Smooth pieces: [breakpoint(k), breakpoint(k + 1)] for k < segments().
    std::size_t segments() const { return kind_ == Kind::circle ? 1 : 4; }
    double breakpoint(std::size_t k) const;
    // velocity evaluated with the one-sided limit of segment `segment`
    Eigen::Vector2d velocity(double s, std::size_t segment) const;

    // Signed enclosed area (positive for counterclockwise).
    double signed_area() const;

private:
    Cycle(Kind kind, Eigen::Vector2d a, Eigen::Vector2d b, Orientation o);

    Eigen::Vector2d base_position(double s) const;
    Eigen::Vector2d base_velocity(double s, std::size_t segment) const;

    Kind kind_;
    Eigen::Vector2d a_;
    Eigen::Vector2d b_;
    Orientation orientation_;
};

// Same image, opposite orientation: position'(s) = position(1 − s).
Cycle reverse(const Cycle& cycle);

// {"kind":"circle","center":[..],"radii":[..],"orientation":"positive"} or
// {"kind":"rectangle","lo":[..],"hi":[..],"orientation":"negative"}.
// Throws InvalidParameters on malformed input.
Cycle cycle_from_json(const std::string& text);
std::string cycle_to_json(const Cycle& cycle);

// Reference loops: A off resonance, B on the resonance ridge, C symmetric
// about Ω = 0. Throws InvalidParameters for other ids.
Cycle default_loop(char id);

// Quadrature node along a cycle.
struct PathNode {
    double s;
    double weight;
    std::size_t segment;
};

// Periodic trapezoid (n nodes) for circles; per-side composite trapezoid with
// n / 4 intervals per side for rectangles.
std::vector<PathNode> path_nodes(const Cycle& cycle, std::size_t n);

// ∮ Σ_i A_i dλ_i by composite trapezoid. n >= 8.
double line_integral_work(const LindbladModel& model, const Cycle& cycle, std::size_t n,
                          std::size_t threads = 1);

struct FluxOptions {
    CurvatureMethod method = CurvatureMethod::finite_difference;
    std::optional<double> h; // nullopt: default_fd_step per axis
    std::size_t threads = 1;
};

// ∬ F₁₂ over the enclosed region, m × m Gauss–Legendre (polar map for circles),
// signed by orientation. m >= 4.
double flux_work(const LindbladModel& model, const Cycle& cycle, std::size_t m,
                 const FluxOptions& opts = {});

struct WorkResult {
    double w_line = 0.0;
    double w_flux = 0.0;
    double stokes_residual = 0.0;
    std::size_t n_path = 0;
    std::size_t n_quad = 0;
};

WorkResult cycle_work(const LindbladModel& model, const Cycle& cycle, std::size_t n,
                      std::size_t m, const FluxOptions& opts = {});

// `w_line,w_flux,stokes_residual,n_path,n_quad`
std::string work_result_csv_header();
std::string work_result_csv_row(const WorkResult& r);

struct ScalarField {
    std::function<double(const ControlPoint&)> value;
    std::function<Eigen::VectorXd(const ControlPoint&)> gradient;
};

// |∮(A + dχ) − ∮A| on the same quadrature nodes.
double gauge_shift_residual(const LindbladModel& model, const Cycle& cycle,
                            const ScalarField& chi, std::size_t n);

} // namespace geomwork
