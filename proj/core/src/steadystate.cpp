#include "geomwork/steadystate.hpp"

#include <cmath>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

#include "geomwork/errors.hpp"

namespace geomwork {

ComplexMatrix liouvillian_matrix(const LindbladModel& model, const ControlPoint& lambda) {
    model.validate();
    const Eigen::Index d = model.hamiltonian.dim();
    const ComplexMatrix H = model.hamiltonian(lambda);
    if (H.rows() != d || H.cols() != d) {
        throw DimensionMismatch("Hamiltonian has wrong dimension");
    }
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);

    ComplexMatrix L = -kI * (Eigen::kroneckerProduct(id, H).eval() -
                             Eigen::kroneckerProduct(H.transpose(), id).eval());
    for (const auto& ch : model.channels) {
        if (ch.rate == 0.0) continue;
        const ComplexMatrix& c = ch.collapse;
        const ComplexMatrix cdc = c.adjoint() * c;
        L += ch.rate * (Eigen::kroneckerProduct(c.conjugate(), c).eval() -
                        0.5 * Eigen::kroneckerProduct(id, cdc).eval() -
                        0.5 * Eigen::kroneckerProduct(cdc.transpose(), id).eval());
    }
    return L;
}

ComplexMatrix vectorize(const ComplexMatrix& rho) {
    return rho.reshaped(rho.size(), 1);
}

ComplexMatrix unvectorize(const Eigen::VectorXcd& v, Eigen::Index dim) {
    if (v.size() != dim * dim) throw DimensionMismatch("vector length is not dim^2");
    return v.reshaped(dim, dim);
}

DensityMatrix steady_state(const LindbladModel& model, const ControlPoint& lambda,
                           const SteadyStateOptions& opts) {
    const Eigen::Index d = model.hamiltonian.dim();
    const ComplexMatrix L = liouvillian_matrix(model, lambda);
    Eigen::JacobiSVD<ComplexMatrix> svd(L, Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues(); // descending
    const Eigen::Index n = sv.size();
    const double smax = sv[0];
    const double smin = sv[n - 1];
    if (smax == 0.0) throw DegenerateSteadyState("Liouvillian is identically zero");
    if (n >= 2 && sv[n - 2] < opts.degeneracy_ratio * smax) {
        std::ostringstream os;
        os << "steady state is not unique: second-smallest singular value " << sv[n - 2]
           << " vs largest " << smax;
        throw DegenerateSteadyState(os.str());
    }
    if (smin > opts.existence_ratio * smax) {
        std::ostringstream os;
        os << "Liouvillian has no null vector: smallest singular value " << smin
           << " vs largest " << smax;
        throw NoSteadyState(os.str());
    }

    ComplexMatrix rho = unvectorize(svd.matrixV().col(n - 1), d);
    const Complex tr = rho.trace();
    if (std::abs(tr) < 1e-300) throw NoSteadyState("null vector is traceless");
    rho /= tr;
    rho = 0.5 * (rho + rho.adjoint()).eval();
    rho /= rho.trace().real();
    // PSD tolerance relaxed slightly: null vector accuracy is ~eps·cond(L).
    return DensityMatrix(std::move(rho), DensityTolerance{1e-12, 1e-12, -1e-10});
}

BlochVector bloch_components(const ComplexMatrix& rho) {
    if (rho.rows() != 2 || rho.cols() != 2) {
        throw DimensionMismatch("Bloch components need a 2x2 density matrix");
    }
    return {(rho * pauli(Pauli::x)).trace().real(), (rho * pauli(Pauli::y)).trace().real(),
            (rho * pauli(Pauli::z)).trace().real()};
}

BlochVector bloch_components(const DensityMatrix& rho) { return bloch_components(rho.mat()); }

ComplexMatrix from_bloch(const BlochVector& b) {
    return 0.5 * (pauli(Pauli::identity) + b.x * pauli(Pauli::x) + b.y * pauli(Pauli::y) +
                  b.z * pauli(Pauli::z));
}

double tls_gamma2(double gamma, double gamma_phi) { return 0.5 * gamma + gamma_phi; }

double tls_denominator(double delta, double omega, double gamma, double gamma_phi) {
    const double g2 = tls_gamma2(gamma, gamma_phi);
    return 4.0 * omega * omega * g2 + gamma * (delta * delta + g2 * g2);
}

BlochVector tls_steady_closed_form(double delta, double omega, double gamma,
                                   double gamma_phi) {
    if (!(gamma > 0.0)) throw InvalidParameters("closed-form steady state needs gamma > 0");
    const double g2 = tls_gamma2(gamma, gamma_phi);
    const double D = tls_denominator(delta, omega, gamma, gamma_phi);
    if (!(D > 0.0)) throw InvalidParameters("closed-form denominator D must be positive");
    return {-2.0 * gamma * omega * delta / D, 2.0 * gamma * omega * g2 / D,
            -gamma * (delta * delta + g2 * g2) / D};
}

} // namespace geomwork
