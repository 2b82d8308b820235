#include "geomwork/ssh.hpp"

#include <cmath>
#include <stdexcept>

#include "geomwork/errors.hpp"

namespace geomwork {

ComplexMatrix ssh_hamiltonian(const SshParams& p) {
    return (p.t1 + p.t2 * std::cos(p.k)) * pauli(Pauli::x) +
           (p.t2 * std::sin(p.k)) * pauli(Pauli::y);
}

ParamHamiltonian ssh_param_hamiltonian(double k) {
    if (!std::isfinite(k)) throw InvalidParameters("SSH momentum must be finite");
    const ComplexMatrix d_t1 = pauli(Pauli::x);
    const ComplexMatrix d_t2 = std::cos(k) * pauli(Pauli::x) + std::sin(k) * pauli(Pauli::y);
    return ParamHamiltonian(
        2, 2, [k](const ControlPoint& p) { return ssh_hamiltonian({p[0], p[1], k}); },
        [d_t1, d_t2](const ControlPoint&, std::size_t i) -> ComplexMatrix {
            switch (i) {
            case 0: return d_t1;
            case 1: return d_t2;
            default: throw std::out_of_range("SSH parameter index must be 0 (t1) or 1 (t2)");
            }
        });
}

LindbladModel ssh_model(double k, double gamma, double gamma_phi) {
    if (!(gamma > 0.0) || !(gamma_phi >= 0.0)) {
        throw InvalidParameters("SSH model needs gamma > 0 and gamma_phi >= 0");
    }
    return LindbladModel{"ssh",
                         ssh_param_hamiltonian(k),
                         {{gamma, pauli(Pauli::minus)}, {0.5 * gamma_phi, pauli(Pauli::z)}},
                         std::nullopt,
                         {{"gamma", gamma}, {"gamma_phi", gamma_phi}, {"k", k}}};
}

double ssh_curvature(double t1, double t2, double k, double gamma, double gamma_phi,
                     double h) {
    return curvature_fd(ssh_model(k, gamma, gamma_phi), ControlPoint{t1, t2}, 0, 1, h);
}

} // namespace geomwork
