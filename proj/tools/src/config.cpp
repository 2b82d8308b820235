#include "geomwork/app/config.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include <json.hpp>

#include "geomwork/errors.hpp"
#include "geomwork/ssh.hpp"

namespace geomwork::app {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// Typed access to a JSON object with path-qualified errors.
class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) fail("", "expected an object");
    }

    [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
        throw ConfigError(path_ + (key.empty() ? "" : "/" + key) + ": " + msg);
    }

    bool has(const std::string& key) {
        seen_.insert(key);
        return j_.contains(key) && !j_.at(key).is_null();
    }

    const json& raw(const std::string& key) const { return j_.at(key); }
    std::string child(const std::string& key) const { return path_ + "/" + key; }

    double number(const std::string& key, double fallback) {
        if (!has(key)) return fallback;
        const auto& v = j_.at(key);
        if (!v.is_number()) fail(key, "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) fail(key, "must be finite");
        return d;
    }

    std::size_t count(const std::string& key, std::size_t fallback) {
        if (!has(key)) return fallback;
        const auto& v = j_.at(key);
        if (!v.is_number_integer() || v.get<long long>() < 0) {
            fail(key, "expected a non-negative integer");
        }
        return v.get<std::size_t>();
    }

    std::string string(const std::string& key, const std::string& fallback) {
        if (!has(key)) return fallback;
        const auto& v = j_.at(key);
        if (!v.is_string()) fail(key, "expected a string");
        return v.get<std::string>();
    }

    // Non-empty, ascending list of finite numbers.
    std::vector<double> sweep(const std::string& key, std::vector<double> fallback) {
        if (!has(key)) return fallback;
        const auto& v = j_.at(key);
        if (!v.is_array()) fail(key, "expected an array of numbers");
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number() || !std::isfinite(e.get<double>())) {
                fail(key, "expected an array of finite numbers");
            }
            out.push_back(e.get<double>());
        }
        if (out.empty()) fail(key, "must not be empty");
        if (!std::is_sorted(out.begin(), out.end())) fail(key, "must be sorted ascending");
        return out;
    }

    // Reject keys that were never queried.
    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!seen_.count(it.key())) fail(it.key(), "unknown key");
        }
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

GridAxis read_axis(Reader& parent, const std::string& key, GridAxis fallback) {
    if (!parent.has(key)) return fallback;
    Reader r(parent.raw(key), parent.child(key));
    GridAxis a{r.number("min", fallback.min), r.number("max", fallback.max),
               r.count("count", fallback.count)};
    r.finish();
    if (a.count < 2) r.fail("count", "must be >= 2");
    if (!(a.max > a.min)) r.fail("max", "must exceed min");
    return a;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = i + 1 == n ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return v;
}

NamedCycle read_cycle(const json& j, const std::string& path, std::size_t index) {
    if (j.is_string()) {
        const auto id = j.get<std::string>();
        if (id.size() != 1 || id[0] < 'A' || id[0] > 'C') {
            throw ConfigError(path + ": default loops are \"A\", \"B\" or \"C\"");
        }
        return {id, default_loop(id[0])};
    }
    if (!j.is_object()) throw ConfigError(path + ": expected a loop id or a cycle object");
    json spec = j;
    std::string id = "loop" + std::to_string(index);
    if (spec.contains("id")) {
        if (!spec["id"].is_string()) throw ConfigError(path + "/id: expected a string");
        id = spec["id"].get<std::string>();
        spec.erase("id");
    }
    for (auto it = spec.begin(); it != spec.end(); ++it) {
        static const std::set<std::string> allowed{"kind", "center", "radii", "lo", "hi",
                                                   "orientation"};
        if (!allowed.count(it.key())) throw ConfigError(path + "/" + it.key() + ": unknown key");
    }
    try {
        return {id, cycle_from_json(spec.dump())};
    } catch (const InvalidParameters& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

} // namespace

LindbladModel ModelSpec::build_with_dephasing(double gp) const {
    if (kind == "ssh") return ssh_model(k, gamma, gp);
    return tls_model(gamma, gp);
}

LindbladModel ModelSpec::build() const { return build_with_dephasing(gamma_phi); }

ExperimentConfig parse_config(const std::string& command, const std::string& text) {
    if (std::find(command_names().begin(), command_names().end(), command) ==
        command_names().end()) {
        throw ConfigError("unknown command '" + command + "'");
    }
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("JSON parse error: ") + e.what());
    }
    if (root.is_null()) root = json::object();
    Reader r(root, "");

    ExperimentConfig c;
    c.command = command;

    // model
    const double default_gphi = command == "field" ? 0.2 : command == "ssh" ? 0.1 : 0.0;
    c.model.kind = command == "ssh" ? "ssh" : "tls";
    c.model.gamma_phi = default_gphi;
    if (r.has("model")) {
        Reader m(r.raw("model"), "/model");
        c.model.kind = m.string("kind", c.model.kind);
        c.model.gamma = m.number("gamma", c.model.gamma);
        c.model.gamma_phi = m.number("gamma_phi", c.model.gamma_phi);
        c.model.k = m.number("k", c.model.k);
        m.finish();
        if (c.model.kind != "tls" && c.model.kind != "ssh") {
            m.fail("kind", "must be \"tls\" or \"ssh\"");
        }
        if (!(c.model.gamma > 0.0)) m.fail("gamma", "must be > 0");
        if (c.model.gamma_phi < 0.0) m.fail("gamma_phi", "must be >= 0");
    }
    const bool tls = c.model.kind == "tls";

    // field
    c.grid = {{-3.0, 3.0, 61}, {0.05, 3.0, 60}};
    if (r.has("grid")) {
        Reader g(r.raw("grid"), "/grid");
        c.grid.lambda1 = read_axis(g, "lambda1", c.grid.lambda1);
        c.grid.lambda2 = read_axis(g, "lambda2", c.grid.lambda2);
        g.finish();
    }
    auto method = [&](const std::string& key, CurvatureMethod fallback) {
        const std::string s = r.string(key, to_string(fallback));
        CurvatureMethod m;
        try {
            m = curvature_method_from_string(s);
        } catch (const InvalidParameters&) {
            r.fail(key, "must be \"closed_form\" or \"finite_difference\"");
        }
        if (m == CurvatureMethod::closed_form && !tls) {
            r.fail(key, "closed_form is only available for the tls model");
        }
        return m;
    };
    const CurvatureMethod default_method =
        tls ? CurvatureMethod::closed_form : CurvatureMethod::finite_difference;
    c.method = method("method", default_method);
    c.flux_method = method("flux_method", default_method);
    if (r.has("h")) {
        c.h = r.number("h", 1e-3);
        if (!(*c.h > 0.0)) r.fail("h", "must be > 0");
    }

    // cycles
    const bool single_cycle = command == "quasistatic";
    if (r.has("cycles")) {
        const auto& arr = r.raw("cycles");
        if (!arr.is_array() || arr.empty()) r.fail("cycles", "expected a non-empty array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            c.cycles.push_back(read_cycle(arr[i], "/cycles/" + std::to_string(i), i));
        }
    } else if (single_cycle) {
        c.cycles.push_back({"B", default_loop('B')});
    } else {
        for (char id : {'A', 'B', 'C'}) c.cycles.push_back({std::string(1, id), default_loop(id)});
    }

    c.gamma_phi_sweep = r.sweep("gamma_phi_sweep", {0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0});
    if (c.gamma_phi_sweep.front() < 0.0) r.fail("gamma_phi_sweep", "values must be >= 0");
    c.periods = r.sweep("periods", {1e2, 1e3, 1e4});
    if (c.periods.front() <= 0.0) r.fail("periods", "values must be > 0");

    c.n_path = r.count("n_path", c.n_path);
    if (c.n_path < 8) r.fail("n_path", "must be >= 8");
    c.m_quad = r.count("m_quad", c.m_quad);
    if (c.m_quad < 4) r.fail("m_quad", "must be >= 4");
    if (r.has("dt")) {
        c.dt = r.number("dt", 0.0);
        if (!(*c.dt > 0.0)) r.fail("dt", "must be > 0");
    }

    // scaling
    c.scaling.gamma2 = {1e2, std::pow(10.0, 2.5), 1e3, std::pow(10.0, 3.5), 1e4};
    if (r.has("scaling")) {
        Reader s(r.raw("scaling"), "/scaling");
        c.scaling.delta = s.number("delta", c.scaling.delta);
        c.scaling.omega = s.number("omega", c.scaling.omega);
        c.scaling.gamma2 = s.sweep("gamma2", c.scaling.gamma2);
        s.finish();
        if (c.scaling.gamma2.size() < 2) s.fail("gamma2", "needs at least two values");
    }
    if (command == "scaling") {
        if (!tls) r.fail("model", "scaling needs the tls model");
        const auto& g2 = c.scaling.gamma2;
        if (g2.front() < 0.5 * c.model.gamma) {
            throw ConfigError("/scaling/gamma2: values must be >= gamma/2 (gamma_phi >= 0)");
        }
        if (std::log10(g2.back() / g2.front()) < 2.0 - 1e-12) {
            throw ConfigError("/scaling/gamma2: sweep must span at least two decades");
        }
    }

    // ssh scan
    c.ssh.k_values = linspace(-std::numbers::pi, std::numbers::pi, 41);
    c.ssh.t1 = {1.0};
    c.ssh.t2 = {0.5};
    if (r.has("ssh")) {
        Reader s(r.raw("ssh"), "/ssh");
        c.ssh.k_values = s.sweep("k_values", c.ssh.k_values);
        c.ssh.t1 = s.sweep("t1", c.ssh.t1);
        c.ssh.t2 = s.sweep("t2", c.ssh.t2);
        c.ssh.h = s.number("h", c.ssh.h);
        s.finish();
        if (!(c.ssh.h > 0.0)) s.fail("h", "must be > 0");
    }

    r.finish();
    return c;
}

std::string config_echo(const ExperimentConfig& c) {
    auto axis = [](const GridAxis& a) {
        return ordered_json{{"min", a.min}, {"max", a.max}, {"count", a.count}};
    };
    ordered_json cycles = ordered_json::array();
    for (const auto& nc : c.cycles) {
        ordered_json spec = ordered_json::parse(cycle_to_json(nc.cycle));
        ordered_json entry{{"id", nc.id}};
        for (auto it = spec.begin(); it != spec.end(); ++it) entry[it.key()] = it.value();
        cycles.push_back(entry);
    }
    ordered_json j{
        {"command", c.command},
        {"model",
         {{"kind", c.model.kind}, {"gamma", c.model.gamma}, {"gamma_phi", c.model.gamma_phi},
          {"k", c.model.k}}},
        {"grid", {{"lambda1", axis(c.grid.lambda1)}, {"lambda2", axis(c.grid.lambda2)}}},
        {"method", to_string(c.method)},
        {"h", c.h ? ordered_json(*c.h) : ordered_json(nullptr)},
        {"flux_method", to_string(c.flux_method)},
        {"cycles", cycles},
        {"gamma_phi_sweep", c.gamma_phi_sweep},
        {"periods", c.periods},
        {"n_path", c.n_path},
        {"m_quad", c.m_quad},
        {"dt", c.dt ? ordered_json(*c.dt) : ordered_json(nullptr)},
        {"scaling",
         {{"delta", c.scaling.delta}, {"omega", c.scaling.omega}, {"gamma2", c.scaling.gamma2}}},
        {"ssh",
         {{"k_values", c.ssh.k_values}, {"t1", c.ssh.t1}, {"t2", c.ssh.t2}, {"h", c.ssh.h}}},
    };
    return j.dump(2) + "\n";
}

} // namespace geomwork::app
