#include "geomwork/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "geomwork/csv.hpp"
#include "geomwork/errors.hpp"
#include "geomwork/parallel.hpp"

namespace geomwork {

namespace {

double spectral_norm(const ComplexMatrix& H) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(H, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

// Sampled maxima of ‖H(λ)‖ and |λ₂| along the cycle.
std::pair<double, double> path_maxima(const LindbladModel& model, const Cycle& cycle) {
    constexpr std::size_t kSamples = 256;
    double h_max = 0.0;
    double l2_max = 0.0;
    for (std::size_t k = 0; k < kSamples; ++k) {
        const ControlPoint p = cycle.position(static_cast<double>(k) / kSamples);
        h_max = std::max(h_max, spectral_norm(model.hamiltonian(p)));
        l2_max = std::max(l2_max, std::abs(p[1]));
    }
    return {h_max, l2_max};
}

double power(const LindbladModel& model, const ControlPoint& lambda,
             const Eigen::Vector2d& rate, const ComplexMatrix& rho) {
    if (rate.squaredNorm() == 0.0) return 0.0;
    return one_form_components(model, lambda, rho).head<2>().dot(rate);
}

} // namespace

DriveSchedule DriveSchedule::frozen(const Eigen::Vector2d& point, double period,
                                    std::size_t repeats) {
    return {Cycle::circle(point, Eigen::Vector2d::Zero()), period, repeats};
}

void DriveSchedule::validate() const {
    if (!(period > 0.0) || !std::isfinite(period)) {
        throw InvalidParameters("drive period must be finite and > 0");
    }
    if (repeats < 1) throw InvalidParameters("drive repeats must be >= 1");
}

ControlPoint DriveSchedule::at(double t) const {
    const double phase = std::fmod(t, period) / period;
    return cycle.position(phase < 0.0 ? phase + 1.0 : phase);
}

Eigen::Vector2d DriveSchedule::rate(double t) const {
    const double phase = std::fmod(t, period) / period;
    return cycle.velocity(phase < 0.0 ? phase + 1.0 : phase) / period;
}

Trajectory evolve(const LindbladModel& model, const DriveSchedule& schedule,
                  const DensityMatrix& rho0, double dt, const EvolveOptions& opts) {
    schedule.validate();
    model.validate();
    if (rho0.dim() != model.hamiltonian.dim()) {
        throw DimensionMismatch("initial state dimension does not match the model");
    }
    if (model.hamiltonian.n_params() != 2) {
        throw InvalidParameters("driven evolution needs a two-parameter model");
    }
    const double T = schedule.period;
    if (!(dt > 0.0) || dt > T / 1000.0 * (1.0 + 1e-12)) {
        throw InvalidParameters("time step must satisfy 0 < dt <= T/1000");
    }
    double rate_max = 0.0;
    for (const auto& ch : model.channels) rate_max = std::max(rate_max, ch.rate);
    const double scale = std::max(rate_max, path_maxima(model, schedule.cycle).first);
    if (scale > 0.0 && dt > 0.1 / scale * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "time step " << dt << " exceeds stability bound 0.1/" << scale;
        throw InvalidParameters(os.str());
    }

    // Integer number of steps per period, a multiple of the sample count.
    const std::size_t samples = std::max<std::size_t>(1, opts.samples_per_period);
    std::size_t steps = static_cast<std::size_t>(std::ceil(T / dt - 1e-9));
    std::size_t stride = 1;
    if (steps >= samples) {
        stride = (steps + samples - 1) / samples;
        steps = stride * samples;
    }
    const double h = T / static_cast<double>(steps);
    const std::size_t total = steps * schedule.repeats;

    Trajectory traj;
    traj.steps_per_period = steps;
    traj.stride = stride;
    traj.dt = h;
    const std::size_t n_store = total / stride + 1;
    traj.times.reserve(n_store);
    traj.states.reserve(n_store);
    traj.work_accumulated.reserve(n_store);

    const DensityTolerance stored_tol{1e-10, 1e-8, opts.positivity_limit};
    auto store = [&](double t, const ComplexMatrix& rho, double work) {
        if (auto why = density_violation(rho, stored_tol)) {
            std::ostringstream os;
            os << "state at t=" << t << " is invalid: " << *why;
            throw IntegrationFailure(os.str());
        }
        traj.times.push_back(t);
        traj.states.emplace_back(rho, stored_tol);
        traj.work_accumulated.push_back(work);
    };

    auto rhs = [&](double t, const ComplexMatrix& rho) {
        return lindblad_rhs(model, model.hamiltonian(schedule.at(t)), rho);
    };

    ComplexMatrix rho = rho0.mat();
    double work = 0.0;
    double p_prev = power(model, schedule.at(0.0), schedule.rate(0.0), rho);
    store(0.0, rho, work);

    for (std::size_t n = 0; n < total; ++n) {
        const double t = h * static_cast<double>(n);
        const double t_next = h * static_cast<double>(n + 1);
        const double t_mid = t + 0.5 * h;
        const ComplexMatrix k1 = rhs(t, rho);
        const ComplexMatrix k2 = rhs(t_mid, rho + 0.5 * h * k1);
        const ComplexMatrix k3 = rhs(t_mid, rho + 0.5 * h * k2);
        const ComplexMatrix k4 = rhs(t_next, rho + h * k3);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        traj.max_hermiticity_residual = std::max(
            traj.max_hermiticity_residual, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
        rho = (0.5 * (rho + rho.adjoint())).eval();

        const double drift = std::abs(rho.trace() - 1.0);
        traj.max_trace_drift = std::max(traj.max_trace_drift, drift);
        if (drift > opts.trace_drift_limit) {
            std::ostringstream os;
            os << "trace drift " << drift << " at t=" << t_next << " (dt=" << h << ")";
            throw StepTooLarge(os.str());
        }

        const double p_next = power(model, schedule.at(t_next), schedule.rate(t_next), rho);
        work += 0.5 * h * (p_prev + p_next);
        p_prev = p_next;

        if ((n + 1) % stride == 0) store(t_next, rho, work);
    }
    return traj;
}

double dynamic_work(const LindbladModel& model, const Trajectory& trajectory,
                    const DriveSchedule& schedule) {
    schedule.validate();
    const auto& times = trajectory.times;
    if (times.size() < 2 || trajectory.states.size() != times.size()) {
        throw InvalidParameters("trajectory is empty or inconsistent");
    }
    const double T = schedule.period;
    const double t_end = T * static_cast<double>(schedule.repeats);
    if (std::abs(times.back() - t_end) > 1e-9 * std::max(1.0, t_end)) {
        throw InvalidParameters("trajectory does not span the schedule");
    }
    const std::size_t per_period = trajectory.steps_per_period / trajectory.stride;
    if (per_period == 0 || times.size() < per_period + 1) {
        throw InvalidParameters("trajectory does not cover a full period");
    }
    const std::size_t first = times.size() - 1 - per_period;
    double w = 0.0;
    double p_prev = 0.0;
    for (std::size_t k = first; k < times.size(); ++k) {
        const double t = times[k];
        // one-sided rate at the period end so t_end maps to the end of the cycle
        const Eigen::Vector2d rate =
            k + 1 == times.size() ? schedule.rate(t - 0.5 * trajectory.dt) : schedule.rate(t);
        const double p = power(model, schedule.at(t), rate, trajectory.states[k].mat());
        if (k > first) w += 0.5 * (t - times[k - 1]) * (p_prev + p);
        p_prev = p;
    }
    return w;
}

double default_time_step(const LindbladModel& model, const Cycle& cycle, double period) {
    const auto [h_max, l2_max] = path_maxima(model, cycle);
    double relax = 0.0;
    if (model.tls) {
        relax = tls_gamma2(model.tls->gamma, model.tls->gamma_phi);
    } else {
        for (const auto& ch : model.channels) relax += ch.rate;
    }
    double dt = period / 2000.0;
    if (relax > 0.0) dt = std::min(dt, 0.05 / relax);
    if (l2_max > 0.0) dt = std::min(dt, 0.05 / l2_max);
    if (h_max > 0.0) dt = std::min(dt, 0.1 / h_max);
    return dt;
}

bool ConvergenceTable::decreasing(double jitter) const {
    for (const auto& r : rows) {
        if (!r.abs_error) return false;
    }
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (*rows[i].abs_error > (1.0 + jitter) * *rows[i - 1].abs_error) return false;
    }
    return true;
}

ConvergenceTable quasistatic_convergence(const LindbladModel& model, const Cycle& cycle,
                                         const std::vector<double>& periods,
                                         const ConvergenceOptions& opts) {
    if (periods.empty()) throw InvalidParameters("period list is empty");
    if (!std::is_sorted(periods.begin(), periods.end())) {
        throw InvalidParameters("period list must be sorted ascending");
    }
    ConvergenceTable table;
    table.w_geom = line_integral_work(model, cycle, opts.n_path, opts.threads);
    table.rows.resize(periods.size());

    const DensityMatrix rho0 = steady_state(model, cycle.position(0.0));
    parallel_for(periods.size(), opts.threads, [&](std::size_t i) {
        ConvergenceRow& row = table.rows[i];
        row.period = periods[i];
        row.w_geom = table.w_geom;
        try {
            const DriveSchedule schedule{cycle, periods[i], 2};
            const double dt = opts.dt ? *opts.dt : default_time_step(model, cycle, periods[i]);
            Trajectory traj = evolve(model, schedule, rho0, dt);
            row.w_dyn = dynamic_work(model, traj, schedule);
            row.abs_error = std::abs(*row.w_dyn - table.w_geom);
            if (opts.keep_trajectories) row.trajectory = std::move(traj);
        } catch (const Error& e) {
            row.failure = e.what();
        }
    });
    return table;
}

std::string convergence_csv(const ConvergenceTable& table) {
    csv::Writer w{"period", "w_dyn", "w_geom", "abs_error"};
    for (const auto& r : table.rows) {
        w.cell(r.period).cell(r.w_dyn).cell(r.w_geom).cell(r.abs_error);
        w.end_row();
    }
    return w.str();
}

std::string trajectory_csv(const Trajectory& trajectory) {
    csv::Writer w{"t", "x", "y", "z", "work_accumulated"};
    for (std::size_t k = 0; k < trajectory.times.size(); ++k) {
        const BlochVector b = bloch_components(trajectory.states[k]);
        w.cell(trajectory.times[k]).cell(b.x).cell(b.y).cell(b.z).cell(trajectory.work_accumulated[k]);
        w.end_row();
    }
    return w.str();
}

} // namespace geomwork
