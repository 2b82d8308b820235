// ssh.hpp — SSH Bloch Hamiltonian at fixed momentum as a two-parameter family
// over the hoppings (t₁, t₂).

#pragma once

#include "geomwork/geometry.hpp"

namespace geomwork {

struct SshParams {
    double t1 = 1.0; // intracell hopping
    double t2 = 0.5; // intercell hopping
    double k = 0.0;  // Bloch momentum
};

// (t₁ + t₂ cos k)σx + (t₂ sin k)σy
ComplexMatrix ssh_hamiltonian(const SshParams& p);

// Control space (t₁, t₂) at fixed k; ∂H/∂t₁ = σx, ∂H/∂t₂ = cos k σx + sin k σy.
ParamHamiltonian ssh_param_hamiltonian(double k);

// Pseudospin dissipators reuse the two-level channels γ·D[σ−] and (γφ/2)·D[σz].
LindbladModel ssh_model(double k, double gamma, double gamma_phi);

// F_{t₁t₂} from the generic pipeline (steady state → one-form → central
// differences with step h).
double ssh_curvature(double t1, double t2, double k, double gamma, double gamma_phi,
                     double h = 1e-3);

} // namespace geomwork
