#include "geomwork/operators.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "geomwork/errors.hpp"

namespace geomwork {

namespace {

void require_finite(const Eigen::VectorXd& v) {
    if (!v.allFinite()) {
        throw InvalidParameters("control point has non-finite coordinates");
    }
}

void require_square(const ComplexMatrix& m, Eigen::Index dim, const char* what) {
    if (m.rows() != dim || m.cols() != dim) {
        std::ostringstream os;
        os << what << ": expected " << dim << "x" << dim << ", got " << m.rows() << "x"
           << m.cols();
        throw DimensionMismatch(os.str());
    }
}

} // namespace

ControlPoint::ControlPoint(std::initializer_list<double> coords)
    : coords_(static_cast<Eigen::Index>(coords.size())) {
    Eigen::Index i = 0;
    for (double c : coords) coords_[i++] = c;
    require_finite(coords_);
}

ControlPoint::ControlPoint(Eigen::VectorXd coords) : coords_(std::move(coords)) {
    require_finite(coords_);
}

ControlPoint ControlPoint::shifted(std::size_t i, double delta) const {
    if (i >= size()) throw std::out_of_range("ControlPoint::shifted: index out of range");
    Eigen::VectorXd c = coords_;
    c[static_cast<Eigen::Index>(i)] += delta;
    return ControlPoint(std::move(c));
}

std::optional<std::string> density_violation(const ComplexMatrix& m,
                                             const DensityTolerance& tol) {
    if (m.rows() != m.cols() || m.rows() == 0) return "not a non-empty square matrix";
    if (!m.allFinite()) return "non-finite entries";
    const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (herm > tol.hermitian) {
        std::ostringstream os;
        os << "Hermiticity residual " << herm << " exceeds " << tol.hermitian;
        return os.str();
    }
    const Complex tr = m.trace();
    if (std::abs(tr - 1.0) > tol.trace) {
        std::ostringstream os;
        os << "trace " << tr << " differs from 1 by more than " << tol.trace;
        return os.str();
    }
    const ComplexMatrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    if (lo < tol.min_eigenvalue) {
        std::ostringstream os;
        os << "smallest eigenvalue " << lo << " below " << tol.min_eigenvalue;
        return os.str();
    }
    return std::nullopt;
}

DensityMatrix::DensityMatrix(ComplexMatrix mat, const DensityTolerance& tol)
    : mat_(std::move(mat)) {
    if (auto why = density_violation(mat_, tol)) throw InvalidState(*why);
}

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index dim) {
    return DensityMatrix(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::basis_state(Eigen::Index dim, Eigen::Index k) {
    ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
    m(k, k) = 1.0;
    return DensityMatrix(std::move(m));
}

ParamHamiltonian::ParamHamiltonian(Eigen::Index dim, std::size_t n_params, EvalFn eval,
                                   GradFn grad)
    : dim_(dim), n_params_(n_params), eval_(std::move(eval)), grad_(std::move(grad)) {
    if (dim_ < 1 || n_params_ < 1) {
        throw InvalidParameters("ParamHamiltonian needs dim >= 1 and n_params >= 1");
    }
}

ComplexMatrix ParamHamiltonian::operator()(const ControlPoint& lambda) const {
    if (lambda.size() != n_params_) {
        throw DimensionMismatch("control point has wrong number of coordinates");
    }
    return eval_(lambda);
}

ComplexMatrix ParamHamiltonian::grad(const ControlPoint& lambda, std::size_t i) const {
    if (i >= n_params_) throw std::out_of_range("Hamiltonian parameter index out of range");
    if (lambda.size() != n_params_) {
        throw DimensionMismatch("control point has wrong number of coordinates");
    }
    return grad_(lambda, i);
}

void LindbladModel::validate() const {
    for (const auto& ch : channels) {
        if (!(ch.rate >= 0.0) || !std::isfinite(ch.rate)) {
            throw InvalidParameters("channel rates must be finite and non-negative");
        }
        require_square(ch.collapse, hamiltonian.dim(), "collapse operator");
    }
}

ComplexMatrix pauli(Pauli which) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    switch (which) {
    case Pauli::x:
        m(0, 1) = 1.0;
        m(1, 0) = 1.0;
        break;
    case Pauli::y:
        m(0, 1) = -kI;
        m(1, 0) = kI;
        break;
    case Pauli::z:
        m(0, 0) = 1.0;
        m(1, 1) = -1.0;
        break;
    case Pauli::minus:
        // lowers |e> = (1,0)^T to |g> = (0,1)^T
        m(1, 0) = 1.0;
        break;
    case Pauli::identity:
        m(0, 0) = 1.0;
        m(1, 1) = 1.0;
        break;
    }
    return m;
}

ComplexMatrix tls_hamiltonian(double delta, double omega) {
    return 0.5 * delta * pauli(Pauli::z) + omega * pauli(Pauli::x);
}

ComplexMatrix tls_hamiltonian_grad(std::size_t i) {
    switch (i) {
    case 0: return 0.5 * pauli(Pauli::z);
    case 1: return pauli(Pauli::x);
    default: throw std::out_of_range("TLS parameter index must be 0 (delta) or 1 (omega)");
    }
}

ParamHamiltonian tls_param_hamiltonian() {
    return ParamHamiltonian(
        2, 2, [](const ControlPoint& p) { return tls_hamiltonian(p[0], p[1]); },
        [](const ControlPoint&, std::size_t i) { return tls_hamiltonian_grad(i); });
}

LindbladModel tls_model(double gamma, double gamma_phi) {
    if (!(gamma > 0.0) || !(gamma_phi >= 0.0) || !std::isfinite(gamma) ||
        !std::isfinite(gamma_phi)) {
        throw InvalidParameters("TLS model needs gamma > 0 and gamma_phi >= 0");
    }
    LindbladModel m{"tls", tls_param_hamiltonian(),
                    {{gamma, pauli(Pauli::minus)}, {0.5 * gamma_phi, pauli(Pauli::z)}},
                    TlsRates{gamma, gamma_phi},
                    {{"gamma", gamma}, {"gamma_phi", gamma_phi}}};
    return m;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a * b - b * a;
}

ComplexMatrix dissipator(const ComplexMatrix& L, const ComplexMatrix& rho) {
    require_square(L, rho.rows(), "dissipator collapse operator");
    if (rho.rows() != rho.cols()) throw DimensionMismatch("dissipator: rho not square");
    const ComplexMatrix LdL = L.adjoint() * L;
    return L * rho * L.adjoint() - 0.5 * (LdL * rho + rho * LdL);
}

ComplexMatrix dissipator(const ComplexMatrix& L, const DensityMatrix& rho) {
    return dissipator(L, rho.mat());
}

ComplexMatrix lindblad_rhs(const LindbladModel& model, const ComplexMatrix& H,
                           const ComplexMatrix& rho) {
    const Eigen::Index d = model.hamiltonian.dim();
    require_square(rho, d, "density matrix");
    require_square(H, d, "Hamiltonian");
    ComplexMatrix out = -kI * commutator(H, rho);
    for (const auto& ch : model.channels) {
        if (!(ch.rate >= 0.0)) throw InvalidParameters("negative channel rate");
        if (ch.rate == 0.0) continue;
        out += ch.rate * dissipator(ch.collapse, rho);
    }
    return out;
}

ComplexMatrix lindblad_rhs(const LindbladModel& model, const ControlPoint& lambda,
                           const DensityMatrix& rho) {
    return lindblad_rhs(model, model.hamiltonian(lambda), rho.mat());
}

} // namespace geomwork
