// operators.hpp — complex matrix algebra, Pauli constants, parametrized
// Hamiltonians and the Lindblad generator.

#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace geomwork {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr Complex kI{0.0, 1.0};

// Point in control-parameter space. Coordinates must be finite.
class ControlPoint {
public:
    ControlPoint() = default;
    ControlPoint(std::initializer_list<double> coords);
    explicit ControlPoint(Eigen::VectorXd coords);

    std::size_t size() const { return static_cast<std::size_t>(coords_.size()); }
    double operator[](std::size_t i) const { return coords_[static_cast<Eigen::Index>(i)]; }
    const Eigen::VectorXd& coords() const { return coords_; }

    // Copy with coordinate i displaced by delta.
    ControlPoint shifted(std::size_t i, double delta) const;

private:
    Eigen::VectorXd coords_;
};

struct DensityTolerance {
    double hermitian = 1e-12;
    double trace = 1e-12;
    double min_eigenvalue = -1e-10;
};

// Hermitian, unit-trace, positive semidefinite matrix. Validated on construction.
class DensityMatrix {
public:
    explicit DensityMatrix(ComplexMatrix mat, const DensityTolerance& tol = {});

    // Maximally mixed state I/d.
    static DensityMatrix maximally_mixed(Eigen::Index dim);
    // |k><k| in the computational basis.
    static DensityMatrix basis_state(Eigen::Index dim, Eigen::Index k);

    const ComplexMatrix& mat() const { return mat_; }
    Eigen::Index dim() const { return mat_.rows(); }

private:
    ComplexMatrix mat_;
};

// Check the density-matrix invariants; returns a description of the first
// violation, or nullopt.
std::optional<std::string> density_violation(const ComplexMatrix& m,
                                             const DensityTolerance& tol = {});

// Family H(λ) with analytic parameter derivatives ∂H/∂λ_i.
class ParamHamiltonian {
public:
    using EvalFn = std::function<ComplexMatrix(const ControlPoint&)>;
    using GradFn = std::function<ComplexMatrix(const ControlPoint&, std::size_t)>;

    ParamHamiltonian(Eigen::Index dim, std::size_t n_params, EvalFn eval, GradFn grad);

    Eigen::Index dim() const { return dim_; }
    std::size_t n_params() const { return n_params_; }

    ComplexMatrix operator()(const ControlPoint& lambda) const;
    // Throws std::out_of_range for i >= n_params().
    ComplexMatrix grad(const ControlPoint& lambda, std::size_t i) const;

private:
    Eigen::Index dim_;
    std::size_t n_params_;
    EvalFn eval_;
    GradFn grad_;
};

struct Channel {
    double rate;
    ComplexMatrix collapse;
};

// Closed-form metadata carried by the driven two-level family, so callers can
// select analytic routes.
struct TlsRates {
    double gamma;
    double gamma_phi;
};

struct LindbladModel {
    std::string name;
    ParamHamiltonian hamiltonian;
    std::vector<Channel> channels;
    std::optional<TlsRates> tls;
    // Named scalar parameters echoed into output metadata.
    std::vector<std::pair<std::string, double>> params;

    // Throws InvalidParameters / DimensionMismatch.
    void validate() const;
};

enum class Pauli { x, y, z, minus, identity };

ComplexMatrix pauli(Pauli which);

// H = (Δ/2)σz + Ωσx
ComplexMatrix tls_hamiltonian(double delta, double omega);
// ∂H/∂Δ for i = 0, ∂H/∂Ω for i = 1.
ComplexMatrix tls_hamiltonian_grad(std::size_t i);

ParamHamiltonian tls_param_hamiltonian();

// Driven two-level system over (Δ, Ω) with channels γ·D[σ−] and (γφ/2)·D[σz].
LindbladModel tls_model(double gamma, double gamma_phi);

// D_L[ρ] = LρL† − ½{L†L, ρ}
ComplexMatrix dissipator(const ComplexMatrix& L, const DensityMatrix& rho);
ComplexMatrix dissipator(const ComplexMatrix& L, const ComplexMatrix& rho);

// −i[H(λ), ρ] + Σ_k r_k D_{L_k}[ρ]
ComplexMatrix lindblad_rhs(const LindbladModel& model, const ControlPoint& lambda,
                           const DensityMatrix& rho);

// Same generator for a fixed Hamiltonian and an unvalidated matrix; used by the
// integrator where intermediate stages are not density matrices.
ComplexMatrix lindblad_rhs(const LindbladModel& model, const ComplexMatrix& H,
                           const ComplexMatrix& rho);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

} // namespace geomwork
