#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "geomwork/app/commands.hpp"
#include "geomwork/app/config.hpp"

using namespace geomwork;
using namespace geomwork::app;
namespace fs = std::filesystem;

namespace {

std::string file(const CommandOutput& out, const std::string& name) {
    for (const auto& [n, content] : out.files) {
        if (n == name) return content;
    }
    FAIL("missing output file " << name);
    return {};
}

// Parsed data rows (header dropped); empty cells become NaN.
std::vector<std::vector<std::string>> rows(const std::string& csv) {
    std::vector<std::vector<std::string>> out;
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        out.push_back(cells);
    }
    return out;
}

double num(const std::string& s) { return s.empty() ? std::nan("") : std::stod(s); }

std::string header(const std::string& csv) { return csv.substr(0, csv.find('\n')); }

void expect_config_error(const std::string& cmd, const std::string& text,
                         const std::string& fragment) {
    try {
        parse_config(cmd, text);
        FAIL("expected ConfigError for " << text);
    } catch (const ConfigError& e) {
        CHECK_MESSAGE(std::string(e.what()).find(fragment) != std::string::npos, e.what());
    }
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("geomwork_test_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int run_cli(const std::string& args) {
    const int status = std::system((std::string(GEOMWORK_CLI_PATH) + " " + args +
                                    " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST_CASE("config defaults per command") {
    const auto field = parse_config("field", "{}");
    CHECK(field.model.kind == "tls");
    CHECK(field.model.gamma == 1.0);
    CHECK(field.model.gamma_phi == 0.2);
    CHECK(field.grid.lambda1.count == 61);
    CHECK(field.grid.lambda2.min == 0.05);
    CHECK(field.method == CurvatureMethod::closed_form);

    const auto loops = parse_config("loops", "{}");
    REQUIRE(loops.cycles.size() == 3);
    CHECK(loops.cycles[1].id == "B");
    CHECK(loops.gamma_phi_sweep == std::vector<double>{0, 0.5, 1, 2, 5, 10, 20, 50});
    CHECK(loops.n_path == 1024);
    CHECK(loops.m_quad == 64);

    const auto q = parse_config("quasistatic", "{}");
    REQUIRE(q.cycles.size() == 1);
    CHECK(q.cycles[0].id == "B");
    CHECK(q.periods == std::vector<double>{1e2, 1e3, 1e4});

    const auto ssh = parse_config("ssh", "{}");
    CHECK(ssh.model.kind == "ssh");
    CHECK(ssh.method == CurvatureMethod::finite_difference);
    CHECK(ssh.ssh.k_values.size() == 41);

    CHECK(parse_config("scaling", "{}").scaling.gamma2.size() == 5);
}

TEST_CASE("config parses explicit blocks") {
    const auto c = parse_config("loops", R"({
        "model": {"gamma": 2.0, "gamma_phi": 0.3},
        "cycles": ["C", {"id": "R", "kind": "rectangle", "lo": [-0.5, 0.2], "hi": [0.5, 0.9],
                         "orientation": "negative"}],
        "gamma_phi_sweep": [0, 1],
        "n_path": 256, "m_quad": 16, "h": 0.002
    })");
    CHECK(c.model.gamma == 2.0);
    REQUIRE(c.cycles.size() == 2);
    CHECK(c.cycles[1].id == "R");
    CHECK(c.cycles[1].cycle.kind() == Cycle::Kind::rectangle);
    CHECK(c.cycles[1].cycle.orientation() == Orientation::negative);
    CHECK(c.h == doctest::Approx(0.002));

    // The echo parses back to the same resolved configuration.
    const auto again = parse_config("loops", [&] {
        auto j = nlohmann::json::parse(config_echo(c));
        j.erase("command");
        return j.dump();
    }());
    CHECK(config_echo(again) == config_echo(c));
}

TEST_CASE("config validation errors carry the JSON path") {
    expect_config_error("field", "{\"grid\": {\"lambda1\": {\"count\": 1}}}", "/grid/lambda1/count");
    expect_config_error("field", "{\"grid\": {\"lambda2\": {\"min\": 2, \"max\": 1}}}",
                        "/grid/lambda2/max");
    expect_config_error("loops", "{\"gamma_phi_sweep\": [1, 0]}", "/gamma_phi_sweep");
    expect_config_error("loops", "{\"gamma_phi_sweep\": []}", "/gamma_phi_sweep");
    expect_config_error("loops", "{\"model\": {\"gamma_phi\": -1}}", "/model/gamma_phi");
    expect_config_error("loops", "{\"model\": {\"gamma\": 0}}", "/model/gamma");
    expect_config_error("loops", "{\"bogus\": 1}", "/bogus");
    expect_config_error("loops", "{\"cycles\": [\"Z\"]}", "/cycles/0");
    expect_config_error("loops", "{\"cycles\": [{\"kind\": \"circle\", \"radii\": [-1, 1]}]}",
                        "/cycles/0");
    expect_config_error("quasistatic", "{\"periods\": [0]}", "/periods");
    expect_config_error("field", "{\"model\": {\"kind\": \"ssh\"}, \"method\": \"closed_form\"}",
                        "/method");
    expect_config_error("scaling", "{\"scaling\": {\"gamma2\": [100, 1000]}}", "two decades");
    expect_config_error("field", "{\"grid\": ", "parse error");
    CHECK_THROWS_AS(parse_config("nope", "{}"), ConfigError);
}

TEST_CASE("field: peak on the resonance column, zero row at Omega = 0") {
    auto c = parse_config("field", R"({"grid": {"lambda1": {"min": -2, "max": 2, "count": 21},
                                                 "lambda2": {"min": 0, "max": 2, "count": 11}}})");
    const auto out = cmd_field(c, {2, false});
    CHECK(out.exit_code == kSuccess);
    const std::string csv = file(out, "field.csv");
    CHECK(header(csv) == "lambda1,lambda2,F");
    const auto r = rows(csv);
    REQUIRE(r.size() == 21 * 11);
    for (std::size_t i = 0; i < 21; ++i) CHECK(num(r[i][2]) == 0.0);

    std::size_t best = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (std::abs(num(r[i][2])) > std::abs(num(r[best][2]))) best = i;
    }
    CHECK(num(r[best][0]) == doctest::Approx(0.0));

    auto meta = nlohmann::json::parse(out.metadata_json);
    CHECK(meta["max_abs_F"]["lambda1"].get<double>() == doctest::Approx(0.0));

    c.method = CurvatureMethod::finite_difference;
    const auto fd = rows(file(cmd_field(c, {2, false}), "field.csv"));
    double worst = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        worst = std::max(worst, std::abs(num(r[i][2]) - num(fd[i][2])));
    }
    CHECK(worst <= 1e-5);
}

TEST_CASE("loops: loop C vanishes, Stokes residuals small, B beats A without dephasing") {
    auto c = parse_config("loops", R"({"gamma_phi_sweep": [0, 5], "n_path": 256, "m_quad": 24})");
    const auto out = cmd_loops(c, {4, false});
    CHECK(out.exit_code == kSuccess);
    const std::string csv = file(out, "loops.csv");
    CHECK(header(csv) == "gamma_phi,loop_id,w_line,w_flux,stokes_residual");
    const auto r = rows(csv);
    REQUIRE(r.size() == 6);
    for (const auto& row : r) {
        CHECK(num(row[4]) <= 1e-6);
        if (row[1] == "C") CHECK(std::abs(num(row[2])) <= 1e-6);
    }
    CHECK(r[0][1] == "A");
    CHECK(r[1][1] == "B");
    CHECK(std::abs(num(r[1][2])) > std::abs(num(r[0][2])));
    // Loop B decays with dephasing.
    CHECK(std::abs(num(r[4][2])) < std::abs(num(r[1][2])));
}

TEST_CASE("orientation: antisymmetric work and zero-area loop") {
    auto c = parse_config("orientation", R"({
        "gamma_phi_sweep": [0, 2, 20], "n_path": 256,
        "cycles": ["B", {"id": "Z", "kind": "circle", "center": [0.3, 0.5], "radii": [0, 0]}]
    })");
    const auto out = cmd_orientation(c, {3, false});
    CHECK(out.exit_code == kSuccess);
    const std::string csv = file(out, "orientation.csv");
    CHECK(header(csv) == "gamma_phi,loop_id,w_forward,w_reversed,antisymmetry_residual");
    const auto r = rows(csv);
    REQUIRE(r.size() == 6);
    for (const auto& row : r) {
        CHECK(num(row[4]) <= 1e-10);
        if (row[1] == "Z") {
            CHECK(num(row[2]) == 0.0);
            CHECK(num(row[3]) == 0.0);
        }
    }
    CHECK(std::abs(num(r[0][2])) > std::abs(num(r[2][2])));
    CHECK(std::abs(num(r[2][2])) > std::abs(num(r[4][2])));
}

TEST_CASE("quasistatic: single period and reversed orientation") {
    auto c = parse_config("quasistatic", R"({"periods": [300], "n_path": 256})");
    const auto out = cmd_quasistatic(c, {1, false});
    CHECK(out.exit_code == kSuccess);
    const auto fwd = rows(file(out, "convergence.csv"));
    REQUIRE(fwd.size() == 1);

    c.cycles[0].cycle = reverse(c.cycles[0].cycle);
    const auto rev = rows(file(cmd_quasistatic(c, {1, false}), "convergence.csv"));
    const double wf = num(fwd[0][1]);
    const double wr = num(rev[0][1]);
    CHECK(std::abs(wf + wr) <= 0.02 * std::abs(wf));
}

TEST_CASE("quasistatic: trajectory dump on request") {
    auto c = parse_config("quasistatic", R"({"periods": [50], "n_path": 128})");
    const auto out = cmd_quasistatic(c, {1, true});
    const std::string traj = file(out, "trajectory_T0.csv");
    CHECK(header(traj) == "t,x,y,z,work_accumulated");
    CHECK(rows(traj).size() > 1000);
}

TEST_CASE("scaling: slopes reported for every quantity, generic route agrees") {
    const auto out = cmd_scaling(parse_config("scaling", "{}"), {2, false});
    CHECK(header(file(out, "scaling.csv")) == "gamma2,abs_F,abs_x,abs_y");
    const auto s = rows(file(out, "slopes.csv"));
    REQUIRE(s.size() == 4);
    CHECK(s[0][0] == "F");
    CHECK(s[3][0] == "F_generic");
    CHECK(std::abs(num(s[3][1]) - num(s[0][1])) <= 0.01);
    CHECK(s[3][4] == "1");
    // slope(y) = -1 holds for the Lorentzian coherence.
    CHECK(num(s[2][1]) == doctest::Approx(-1.0).epsilon(0.1));
    // The exit code follows the pass column.
    bool all = true;
    for (const auto& row : s) all = all && row[4] == "1";
    CHECK(out.exit_code == (all ? kSuccess : kNumericFailure));
}

TEST_CASE("ssh: curvature vanishes where the two derivatives are parallel") {
    auto c = parse_config("ssh", R"({"ssh": {"k_values": [0, 1.5707963267948966, 3.141592653589793]}})");
    const auto out = cmd_ssh(c, {2, false});
    CHECK(out.exit_code == kSuccess);
    const std::string csv = file(out, "ssh.csv");
    CHECK(header(csv) == "k,t1,t2,F");
    const auto r = rows(csv);
    REQUIRE(r.size() == 3);
    CHECK(std::abs(num(r[0][3])) <= 1e-8);
    CHECK(std::abs(num(r[2][3])) <= 1e-8);
    CHECK(std::abs(num(r[1][3])) > 1e-3);
}

TEST_CASE("data files are independent of the thread count") {
    const auto field = parse_config("field", R"({"grid": {"lambda1": {"count": 15}, "lambda2": {"count": 9}},
                                                 "method": "finite_difference"})");
    CHECK(cmd_field(field, {1, false}).files == cmd_field(field, {6, false}).files);
    const auto loops = parse_config("loops", R"({"gamma_phi_sweep": [0, 1], "n_path": 128, "m_quad": 8})");
    CHECK(cmd_loops(loops, {1, false}).files == cmd_loops(loops, {5, false}).files);
}

TEST_CASE("run directory layout") {
    const auto dir = scratch("layout");
    const auto c = parse_config("ssh", R"({"ssh": {"k_values": [0, 1]}})");
    const auto out = run_command(c, {1, false});
    write_run_directory(dir.string(), c, out);
    CHECK(fs::exists(dir / "config_echo.json"));
    CHECK(fs::exists(dir / "ssh.csv"));
    std::ifstream in(dir / "metadata.json");
    const auto meta = nlohmann::json::parse(in);
    CHECK(meta.contains("timestamp"));
    CHECK(meta["command"] == "ssh");
    fs::remove_all(dir);
}

TEST_CASE("executable exit codes") {
    const auto dir = scratch("exe");
    auto write = [&](const std::string& name, const std::string& text) {
        std::ofstream(dir / name) << text;
        return (dir / name).string();
    };
    const std::string ok = write("ok.json", R"({"grid": {"lambda1": {"count": 5}, "lambda2": {"count": 4}}})");
    const std::string bad = write("bad.json", R"({"grid": {"lambda1": {"count": 1}}})");
    const std::string out = (dir / "out").string();

    CHECK(run_cli("field --config " + ok + " --out " + out + " --threads 2") == 0);
    CHECK(fs::exists(fs::path(out) / "field.csv"));
    CHECK(run_cli("field --config " + bad + " --out " + out) == 2);
    CHECK(run_cli("field --config " + (dir / "missing.json").string() + " --out " + out) == 2);
    CHECK(run_cli("field --out " + out) == 2);
    CHECK(run_cli("bogus --config " + ok + " --out " + out) == 2);

    const std::string unstable = write("q.json", R"({"periods": [10], "dt": 1.0})");
    CHECK(run_cli("quasistatic --config " + unstable + " --out " + out) == 1);
    fs::remove_all(dir);
}
