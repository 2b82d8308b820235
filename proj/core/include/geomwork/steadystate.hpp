// steadystate.hpp — Liouvillian superoperator, null-space steady state and the
// closed-form two-level steady state.

#pragma once

#include "geomwork/operators.hpp"

namespace geomwork {

struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double norm_squared() const { return x * x + y * y + z * z; }
};

// Column-stacking convention: vec(ρ)[i + d·j] = ρ(i, j), and
// vec(ρ̇) = L · vec(ρ).
ComplexMatrix liouvillian_matrix(const LindbladModel& model, const ControlPoint& lambda);

ComplexMatrix vectorize(const ComplexMatrix& rho);
ComplexMatrix unvectorize(const Eigen::VectorXcd& v, Eigen::Index dim);

struct SteadyStateOptions {
    // second-smallest / largest singular value below this → degenerate
    double degeneracy_ratio = 1e-8;
    // smallest / largest singular value above this → no steady state
    double existence_ratio = 1e-6;
};

// Null vector of the Liouvillian (smallest right singular vector), reshaped,
// Hermitized and trace-normalized.
//
// Throws DegenerateSteadyState when the null space is not one-dimensional and
// NoSteadyState when the Liouvillian is numerically nonsingular.
DensityMatrix steady_state(const LindbladModel& model, const ControlPoint& lambda,
                           const SteadyStateOptions& opts = {});

// (Tr ρσx, Tr ρσy, Tr ρσz); d must be 2.
BlochVector bloch_components(const DensityMatrix& rho);
BlochVector bloch_components(const ComplexMatrix& rho);

// ρ = ½(I + xσx + yσy + zσz)
ComplexMatrix from_bloch(const BlochVector& b);

// Γ₂ = γ/2 + γφ
double tls_gamma2(double gamma, double gamma_phi);
// D = 4Ω²Γ₂ + γ(Δ² + Γ₂²)
double tls_denominator(double delta, double omega, double gamma, double gamma_phi);

// Analytic steady state of the driven two-level system. Throws
// InvalidParameters for γ <= 0 or D <= 0.
BlochVector tls_steady_closed_form(double delta, double omega, double gamma,
                                   double gamma_phi);

} // namespace geomwork
