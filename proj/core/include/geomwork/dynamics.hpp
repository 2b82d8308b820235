// dynamics.hpp — time-dependent Lindblad integration along a driven cycle and
// the dynamically accumulated work.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "geomwork/cycles.hpp"

namespace geomwork {

// λ(t) = cycle.position((t mod T) / T), repeated `repeats` times.
struct DriveSchedule {
    Cycle cycle;
    double period;
    std::size_t repeats = 1;

    // Constant λ = point for `repeats` periods of length `period`.
    static DriveSchedule frozen(const Eigen::Vector2d& point, double period,
                                std::size_t repeats = 1);

    void validate() const;
    ControlPoint at(double t) const;
    // dλ/dt
    Eigen::Vector2d rate(double t) const;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<DensityMatrix> states;
    std::vector<double> work_accumulated;

    std::size_t steps_per_period = 0;
    std::size_t stride = 0;
    double dt = 0.0;
    double max_trace_drift = 0.0;
    double max_hermiticity_residual = 0.0; // before re-Hermitization

    const DensityMatrix& final_state() const { return states.back(); }
};

struct EvolveOptions {
    // Stored samples per period; the step count is rounded up to a multiple.
    std::size_t samples_per_period = 1000;
    double trace_drift_limit = 1e-6;
    double positivity_limit = -1e-6;
};

// Classical fourth-order Runge–Kutta with fixed step (rounded down so that an
// integer number of steps spans each period). The state is Hermitized after
// every step and the work power Tr(ρ Σ_i ∂_iH λ̇_i) is accumulated by the
// trapezoid rule.
//
// Throws InvalidParameters when dt > T/1000 or dt > 0.1 / max(rates, ‖H‖),
// StepTooLarge when the trace drifts by more than 1e-6 and IntegrationFailure
// when a stored state has an eigenvalue below −1e-6.
Trajectory evolve(const LindbladModel& model, const DriveSchedule& schedule,
                  const DensityMatrix& rho0, double dt, const EvolveOptions& opts = {});

// W = ∫ Tr(ρ(t) Σ_i ∂_iH λ̇_i) dt over the last period, trapezoid on the
// stored samples. Throws InvalidParameters if the trajectory does not match
// the schedule.
double dynamic_work(const LindbladModel& model, const Trajectory& trajectory,
                    const DriveSchedule& schedule);

// dt = min(T/2000, 0.05/Γ₂, 0.05/Ω_max, 0.1/‖H‖_max). For non-TLS models Γ₂ is
// replaced by the sum of channel rates and Ω_max by the largest |λ₂| on the
// cycle.
double default_time_step(const LindbladModel& model, const Cycle& cycle, double period);

struct ConvergenceRow {
    double period = 0.0;
    std::optional<double> w_dyn;
    double w_geom = 0.0;
    std::optional<double> abs_error;
    std::string failure;
    std::optional<Trajectory> trajectory; // kept on request
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    double w_geom = 0.0;

    // Every step satisfies error[i+1] <= (1 + jitter) · error[i]; vacuous for a
    // single row. False if any row failed.
    bool decreasing(double jitter = 0.1) const;
};

struct ConvergenceOptions {
    std::size_t n_path = 1024;
    std::size_t threads = 1;
    // nullopt: default_time_step per period
    std::optional<double> dt;
    bool keep_trajectories = false;
};

// For each period: start at ρ_ss(λ(0)), run two periods, measure the second.
// Integration failures are recorded per row; the sweep continues.
ConvergenceTable quasistatic_convergence(const LindbladModel& model, const Cycle& cycle,
                                         const std::vector<double>& periods,
                                         const ConvergenceOptions& opts = {});

// `period,w_dyn,w_geom,abs_error`
std::string convergence_csv(const ConvergenceTable& table);
// `t,x,y,z,work_accumulated` (two-level models only)
std::string trajectory_csv(const Trajectory& trajectory);

} // namespace geomwork
