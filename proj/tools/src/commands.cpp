#include "geomwork/app/commands.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "geomwork/csv.hpp"
#include "geomwork/dynamics.hpp"
#include "geomwork/errors.hpp"
#include "geomwork/parallel.hpp"
#include "geomwork/ssh.hpp"
#include "geomwork/steadystate.hpp"

namespace geomwork::app {

using nlohmann::ordered_json;

namespace {

constexpr double kStokesTolerance = 1e-6;
constexpr double kAntisymmetryTolerance = 1e-10;

// Short form for the human-readable summary; CSVs keep full precision.
std::string fmt(double v) {
    std::ostringstream s;
    s << std::setprecision(6) << v;
    return s.str();
}

// Least-squares slope of log|y| against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(std::abs(y[i]));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double denom = static_cast<double>(n) * sxx - sx * sx;
    if (!(std::abs(denom) > 0.0)) throw InvalidParameters("scaling fit: degenerate abscissae");
    return (static_cast<double>(n) * sxy - sx * sy) / denom;
}

} // namespace

CommandOutput cmd_field(const ExperimentConfig& config, const RunOptions& opts) {
    const LindbladModel model = config.model.build();
    const CurvatureField field =
        curvature_field(model, config.grid, config.method, config.h, opts.threads);

    CommandOutput out;
    out.files.emplace_back("field.csv", field_csv(field));
    ordered_json meta = ordered_json::parse(field_metadata_json(field));

    std::ostringstream s;
    const auto peak = max_abs(field);
    if (peak) {
        meta["max_abs_F"] = {{"lambda1", peak->lambda1},
                             {"lambda2", peak->lambda2},
                             {"F", peak->value}};
        s << "max |F| = " << fmt(std::abs(peak->value)) << " (F = " << fmt(peak->value)
          << ") at lambda1 = " << fmt(peak->lambda1) << ", lambda2 = " << fmt(peak->lambda2)
          << "\n";
    } else {
        s << "no node produced a curvature value\n";
        out.exit_code = kNumericFailure;
    }
    if (!field.failures.empty()) {
        s << field.failures.size() << " node(s) missing; first: " << field.failures.front()
          << "\n";
    }
    out.metadata_json = meta.dump();
    out.summary = s.str();
    return out;
}

CommandOutput cmd_loops(const ExperimentConfig& config, const RunOptions& opts) {
    const auto& sweep = config.gamma_phi_sweep;
    const auto& cycles = config.cycles;
    const std::size_t nc = cycles.size();

    struct Cell {
        std::optional<WorkResult> result;
        std::string failure;
    };
    std::vector<Cell> cells(sweep.size() * nc);
    parallel_for(cells.size(), opts.threads, [&](std::size_t idx) {
        const double gp = sweep[idx / nc];
        const NamedCycle& nc_ = cycles[idx % nc];
        try {
            const LindbladModel model = config.model.build_with_dephasing(gp);
            cells[idx].result = cycle_work(model, nc_.cycle, config.n_path, config.m_quad,
                                           FluxOptions{config.flux_method, config.h, 1});
        } catch (const Error& e) {
            cells[idx].failure = e.what();
        }
    });

    CommandOutput out;
    csv::Writer w{"gamma_phi", "loop_id", "w_line", "w_flux", "stokes_residual"};
    double worst = 0.0;
    std::size_t failures = 0;
    std::ostringstream s;
    for (std::size_t idx = 0; idx < cells.size(); ++idx) {
        const auto& c = cells[idx];
        w.cell(sweep[idx / nc]).cell(cycles[idx % nc].id);
        if (c.result) {
            w.cell(c.result->w_line).cell(c.result->w_flux).cell(c.result->stokes_residual);
            worst = std::max(worst, c.result->stokes_residual);
        } else {
            w.cell(std::optional<double>{}).cell(std::optional<double>{})
                .cell(std::optional<double>{});
            ++failures;
            s << "gamma_phi=" << fmt(sweep[idx / nc]) << " loop " << cycles[idx % nc].id
              << ": " << c.failure << "\n";
        }
        w.end_row();
    }
    out.files.emplace_back("loops.csv", w.str());

    // Decay of each loop from the first to the last sweep value.
    ordered_json decay = ordered_json::object();
    for (std::size_t k = 0; k < nc; ++k) {
        const auto& first = cells[k].result;
        const auto& last = cells[(sweep.size() - 1) * nc + k].result;
        if (first && last && first->w_line != 0.0) {
            const double ratio = std::abs(last->w_line) / std::abs(first->w_line);
            decay[cycles[k].id] = ratio;
            s << "loop " << cycles[k].id << ": |W(" << fmt(sweep.back()) << ")| / |W("
              << fmt(sweep.front()) << ")| = " << fmt(ratio) << "\n";
        } else {
            decay[cycles[k].id] = nullptr;
        }
    }
    s << "max stokes_residual = " << fmt(worst) << " (tolerance " << fmt(kStokesTolerance)
      << ")\n";
    const bool ok = failures == 0 && worst <= kStokesTolerance;
    out.exit_code = ok ? kSuccess : kNumericFailure;
    out.metadata_json = ordered_json{{"max_stokes_residual", worst},
                                     {"stokes_tolerance", kStokesTolerance},
                                     {"failed_cells", failures},
                                     {"decay_ratio_last_over_first", decay}}
                            .dump();
    out.summary = s.str();
    return out;
}

CommandOutput cmd_orientation(const ExperimentConfig& config, const RunOptions& opts) {
    const auto& sweep = config.gamma_phi_sweep;
    const auto& cycles = config.cycles;
    const std::size_t nc = cycles.size();

    struct Cell {
        double forward = 0.0;
        double reversed = 0.0;
        std::string failure;
    };
    std::vector<Cell> cells(sweep.size() * nc);
    parallel_for(cells.size(), opts.threads, [&](std::size_t idx) {
        const LindbladModel model = config.model.build_with_dephasing(sweep[idx / nc]);
        const Cycle& c = cycles[idx % nc].cycle;
        try {
            cells[idx].forward = line_integral_work(model, c, config.n_path);
            cells[idx].reversed = line_integral_work(model, reverse(c), config.n_path);
        } catch (const Error& e) {
            cells[idx].failure = e.what();
        }
    });

    CommandOutput out;
    csv::Writer w{"gamma_phi", "loop_id", "w_forward", "w_reversed", "antisymmetry_residual"};
    double worst = 0.0;
    std::size_t failures = 0;
    std::ostringstream s;
    for (std::size_t idx = 0; idx < cells.size(); ++idx) {
        const auto& c = cells[idx];
        w.cell(sweep[idx / nc]).cell(cycles[idx % nc].id);
        if (c.failure.empty()) {
            const double residual = std::abs(c.forward + c.reversed);
            worst = std::max(worst, residual);
            w.cell(c.forward).cell(c.reversed).cell(residual);
        } else {
            ++failures;
            w.cell(std::optional<double>{}).cell(std::optional<double>{})
                .cell(std::optional<double>{});
            s << "gamma_phi=" << fmt(sweep[idx / nc]) << " loop " << cycles[idx % nc].id
              << ": " << c.failure << "\n";
        }
        w.end_row();
    }
    out.files.emplace_back("orientation.csv", w.str());
    s << "max antisymmetry_residual = " << fmt(worst) << " (tolerance "
      << fmt(kAntisymmetryTolerance) << ")\n";
    out.exit_code = failures == 0 && worst <= kAntisymmetryTolerance ? kSuccess : kNumericFailure;
    out.metadata_json = ordered_json{{"max_antisymmetry_residual", worst},
                                     {"antisymmetry_tolerance", kAntisymmetryTolerance},
                                     {"failed_cells", failures}}
                            .dump();
    out.summary = s.str();
    return out;
}

CommandOutput cmd_quasistatic(const ExperimentConfig& config, const RunOptions& opts) {
    const LindbladModel model = config.model.build();
    CommandOutput out;
    ordered_json meta = ordered_json::object();
    std::ostringstream s;
    bool all_decreasing = true;
    const bool single = config.cycles.size() == 1;

    for (const auto& nc : config.cycles) {
        ConvergenceOptions co;
        co.n_path = config.n_path;
        co.threads = opts.threads;
        co.dt = config.dt;
        co.keep_trajectories = opts.dump_trajectories;
        const ConvergenceTable table =
            quasistatic_convergence(model, nc.cycle, config.periods, co);

        const std::string suffix = single ? "" : "_" + nc.id;
        out.files.emplace_back("convergence" + suffix + ".csv", convergence_csv(table));
        for (std::size_t i = 0; i < table.rows.size(); ++i) {
            const auto& row = table.rows[i];
            if (row.trajectory) {
                out.files.emplace_back("trajectory" + suffix + "_T" + std::to_string(i) + ".csv",
                                       trajectory_csv(*row.trajectory));
            }
            if (!row.failure.empty()) {
                s << "loop " << nc.id << " T=" << fmt(row.period) << ": " << row.failure << "\n";
            }
        }
        const bool dec = table.decreasing();
        all_decreasing = all_decreasing && dec;
        ordered_json failures = ordered_json::array();
        for (const auto& row : table.rows) {
            if (!row.failure.empty()) failures.push_back({{"period", row.period},
                                                          {"error", row.failure}});
        }
        meta[nc.id] = {{"w_geom", table.w_geom}, {"decreasing", dec}, {"failures", failures}};
        s << "loop " << nc.id << ": w_geom = " << fmt(table.w_geom)
          << ", error column " << (dec ? "decreasing" : "NOT decreasing") << "\n";
        for (const auto& row : table.rows) {
            s << "  T=" << fmt(row.period) << "  abs_error=" << (row.abs_error ? fmt(*row.abs_error) : "failed")
              << "\n";
        }
    }
    out.exit_code = all_decreasing ? kSuccess : kNumericFailure;
    out.metadata_json = ordered_json{{"jitter_allowance", 0.1}, {"loops", meta}}.dump();
    out.summary = s.str();
    return out;
}

CommandOutput cmd_scaling(const ExperimentConfig& config, const RunOptions& opts) {
    const double gamma = config.model.gamma;
    const double delta = config.scaling.delta;
    const double omega = config.scaling.omega;
    const auto& g2 = config.scaling.gamma2;

    std::vector<double> F(g2.size()), Fg(g2.size()), X(g2.size()), Y(g2.size());
    parallel_for(g2.size(), opts.threads, [&](std::size_t i) {
        const double gp = g2[i] - 0.5 * gamma;
        F[i] = curvature_closed_form_tls(delta, omega, gamma, gp);
        const BlochVector b = tls_steady_closed_form(delta, omega, gamma, gp);
        X[i] = b.x;
        Y[i] = b.y;
        const LindbladModel model = tls_model(gamma, gp);
        const ControlPoint p{delta, omega};
        Fg[i] = config.h ? curvature_fd(model, p, 0, 1, *config.h) : curvature_fd(model, p, 0, 1);
    });

    CommandOutput out;
    csv::Writer w{"gamma2", "abs_F", "abs_x", "abs_y"};
    for (std::size_t i = 0; i < g2.size(); ++i) {
        w.cell(g2[i]).cell(std::abs(F[i])).cell(std::abs(X[i])).cell(std::abs(Y[i]));
        w.end_row();
    }
    out.files.emplace_back("scaling.csv", w.str());

    struct Fit {
        const char* name;
        double slope;
        double target;
        double tolerance;
    };
    const double sF = loglog_slope(g2, F);
    const std::vector<Fit> fits{
        {"F", sF, -2.0, 0.1},
        {"x", loglog_slope(g2, X), -1.0, 0.1},
        {"y", loglog_slope(g2, Y), -1.0, 0.1},
        {"F_generic", loglog_slope(g2, Fg), sF, 0.01},
    };
    csv::Writer sw{"quantity", "slope", "target", "tolerance", "pass"};
    ordered_json meta = ordered_json::object();
    std::ostringstream s;
    bool ok = true;
    for (const auto& f : fits) {
        const bool pass = std::abs(f.slope - f.target) <= f.tolerance;
        ok = ok && pass;
        sw.cell(f.name).cell(f.slope).cell(f.target).cell(f.tolerance).cell(pass ? "1" : "0");
        sw.end_row();
        meta[f.name] = {{"slope", f.slope}, {"target", f.target}, {"tolerance", f.tolerance},
                        {"pass", pass}};
        s << "slope(" << f.name << ") = " << fmt(f.slope) << "  target " << fmt(f.target)
          << " +/- " << fmt(f.tolerance) << "  " << (pass ? "PASS" : "FAIL") << "\n";
    }
    out.files.emplace_back("slopes.csv", sw.str());
    out.exit_code = ok ? kSuccess : kNumericFailure;
    out.metadata_json = ordered_json{{"delta", delta}, {"omega", omega}, {"gamma", gamma},
                                     {"slopes", meta}}
                            .dump();
    out.summary = s.str();
    return out;
}

CommandOutput cmd_ssh(const ExperimentConfig& config, const RunOptions& opts) {
    const auto& sc = config.ssh;
    const std::size_t nk = sc.k_values.size();
    const std::size_t nt2 = sc.t2.size();
    const std::size_t n = sc.t1.size() * nt2 * nk;

    std::vector<std::optional<double>> values(n);
    std::vector<std::string> failures(n);
    parallel_for(n, opts.threads, [&](std::size_t idx) {
        const double k = sc.k_values[idx % nk];
        const double t2 = sc.t2[(idx / nk) % nt2];
        const double t1 = sc.t1[idx / (nk * nt2)];
        try {
            values[idx] = ssh_curvature(t1, t2, k, config.model.gamma, config.model.gamma_phi, sc.h);
        } catch (const Error& e) {
            failures[idx] = e.what();
        }
    });

    CommandOutput out;
    csv::Writer w{"k", "t1", "t2", "F"};
    std::size_t missing = 0;
    double peak = 0.0;
    std::ostringstream s;
    for (std::size_t idx = 0; idx < n; ++idx) {
        const double k = sc.k_values[idx % nk];
        const double t2 = sc.t2[(idx / nk) % nt2];
        const double t1 = sc.t1[idx / (nk * nt2)];
        w.cell(k).cell(t1).cell(t2).cell(values[idx]);
        w.end_row();
        if (values[idx]) {
            peak = std::max(peak, std::abs(*values[idx]));
        } else {
            ++missing;
            s << "k=" << fmt(k) << " t1=" << fmt(t1) << " t2=" << fmt(t2) << ": " << failures[idx]
              << "\n";
        }
    }
    out.files.emplace_back("ssh.csv", w.str());
    s << "max |F| = " << fmt(peak) << " over " << n - missing << " node(s)\n";
    out.exit_code = missing == n ? kNumericFailure : kSuccess;
    out.metadata_json =
        ordered_json{{"max_abs_F", peak}, {"missing_nodes", missing}, {"h", sc.h}}.dump();
    out.summary = s.str();
    return out;
}

CommandOutput run_command(const ExperimentConfig& config, const RunOptions& opts) {
    try {
        if (config.command == "field") return cmd_field(config, opts);
        if (config.command == "loops") return cmd_loops(config, opts);
        if (config.command == "orientation") return cmd_orientation(config, opts);
        if (config.command == "quasistatic") return cmd_quasistatic(config, opts);
        if (config.command == "scaling") return cmd_scaling(config, opts);
        if (config.command == "ssh") return cmd_ssh(config, opts);
    } catch (const Error& e) {
        CommandOutput out;
        out.exit_code = kNumericFailure;
        out.metadata_json = ordered_json{{"error", e.what()}}.dump();
        out.summary = std::string("numeric failure: ") + e.what() + "\n";
        return out;
    }
    throw ConfigError("unknown command '" + config.command + "'");
}

void write_run_directory(const std::string& dir, const ExperimentConfig& config,
                         const CommandOutput& output) {
    namespace fs = std::filesystem;
    const fs::path root(dir);
    fs::create_directories(root);
    auto write = [&](const std::string& name, const std::string& content) {
        std::ofstream f(root / name, std::ios::binary);
        f << content;
        if (!f) throw std::runtime_error("cannot write " + (root / name).string());
    };
    write("config_echo.json", config_echo(config));
    for (const auto& [name, content] : output.files) write(name, content);

    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);
    ordered_json meta{
        {"command", config.command},
        {"timestamp", stamp},
        {"exit_code", output.exit_code},
        {"files", ordered_json::array()},
        {"results", ordered_json::parse(output.metadata_json)},
    };
    for (const auto& f : output.files) meta["files"].push_back(f.first);
    write("metadata.json", meta.dump(2) + "\n");
}

} // namespace geomwork::app
