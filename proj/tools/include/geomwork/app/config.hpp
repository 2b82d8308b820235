// config.hpp — experiment configuration for the geomwork CLI.

#pragma once

#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "geomwork/cycles.hpp"
#include "geomwork/geometry.hpp"

namespace geomwork::app {

// Invalid configuration; `what()` starts with the JSON path or parse position.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ModelSpec {
    std::string kind = "tls"; // "tls" | "ssh"
    double gamma = 1.0;
    double gamma_phi = 0.0;
    double k = std::numbers::pi; // ssh only

    LindbladModel build() const;
    LindbladModel build_with_dephasing(double gamma_phi) const;
};

struct NamedCycle {
    std::string id;
    Cycle cycle;
};

struct ScalingSpec {
    double delta = 0.5;
    double omega = 0.8;
    std::vector<double> gamma2;
};

struct SshScanSpec {
    std::vector<double> k_values;
    std::vector<double> t1;
    std::vector<double> t2;
    double h = 1e-3;
};

struct ExperimentConfig {
    std::string command;
    ModelSpec model;
    GridSpec grid;
    CurvatureMethod method = CurvatureMethod::closed_form;
    std::optional<double> h;
    CurvatureMethod flux_method = CurvatureMethod::closed_form;
    std::vector<NamedCycle> cycles;
    std::vector<double> gamma_phi_sweep;
    std::vector<double> periods;
    std::size_t n_path = 1024;
    std::size_t m_quad = 64;
    std::optional<double> dt;
    ScalingSpec scaling;
    SshScanSpec ssh;
};

inline const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"field", "loops", "orientation",
                                                "quasistatic", "scaling", "ssh"};
    return names;
}

// Parse and validate a JSON document for `command`, filling defaults.
ExperimentConfig parse_config(const std::string& command, const std::string& text);

// Fully resolved configuration (defaults included) as pretty JSON.
std::string config_echo(const ExperimentConfig& config);

} // namespace geomwork::app
