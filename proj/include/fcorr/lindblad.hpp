#pragma once

// Liouvillian construction and steady-state solution.
//
// Vectorization is column-stacking: vec(rho)[i + j*d] = rho(i, j), so
// vec(A rho B) = (B^T kron A) vec(rho). This matches Eigen's column-major
// Map of a dense matrix.

#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "fcorr/hilbert.hpp"

namespace fcorr {

struct CollapseTerm {
    Matrix op;
    double rate = 0.0;
    std::string label;
};

/// Hamiltonian plus (collapse operator, rate) pairs, all in units of the
/// emitter decay rate gamma_sigma = 1.
struct LindbladModel {
    HilbertSpace space;
    Matrix H;
    std::vector<CollapseTerm> collapse;

    void validate() const {
        const int d = space.total();
        if (H.rows() != d || H.cols() != d)
            throw ValidationError("LindbladModel: H dimension does not match space");
        const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
        if ((H - H.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
            throw ValidationError("LindbladModel: H is not Hermitian");
        std::set<std::string> labels;
        for (const auto& c : collapse) {
            if (c.op.rows() != d || c.op.cols() != d)
                throw ValidationError("LindbladModel: collapse operator dimension mismatch");
            if (c.rate < 0.0)
                throw ValidationError("LindbladModel: negative collapse rate");
            if (!labels.insert(c.label).second)
                throw ValidationError("LindbladModel: duplicate channel label '" + c.label + "'");
        }
    }
};

struct Superoperator {
    Matrix data; // d^2 x d^2
    HilbertSpace space;

    Matrix apply(const Matrix& x) const {
        const int d = space.total();
        if (x.rows() != d || x.cols() != d)
            throw DimensionError("Superoperator::apply: dimension mismatch");
        Vector v = Eigen::Map<const Vector>(x.data(), d * d);
        Vector w = data * v;
        return Eigen::Map<const Matrix>(w.data(), d, d);
    }
};

namespace detail {

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

} // namespace detail

/// L(rho) = -i[H, rho] + sum_k (rate_k/2) (2 C rho C+ - C+C rho - rho C+C).
inline Superoperator build_liouvillian(const LindbladModel& model) {
    model.validate();
    const int d = model.space.total();
    const Matrix id = identity(d);

    Matrix L = Complex(0, -1) * (detail::kron(id, model.H) -
                                 detail::kron(model.H.transpose(), id));
    for (const auto& c : model.collapse) {
        const Matrix cdc = c.op.adjoint() * c.op;
        L += (c.rate / 2.0) *
             (2.0 * detail::kron(c.op.conjugate(), c.op) -
              detail::kron(id, cdc) - detail::kron(cdc.transpose(), id));
    }
    return Superoperator{std::move(L), model.space};
}

/// Steady state of L: replace the row of the first diagonal element with
/// the trace constraint, solve the resulting square system by (sparse) LU,
/// and verify the residual against the untouched Liouvillian.
inline Matrix steady_state(const Superoperator& L) {
    const int d = L.space.total();
    const int n = d * d;

    Eigen::SparseMatrix<Complex> M(n, n);
    {
        std::vector<Eigen::Triplet<Complex>> trip;
        trip.reserve(n * 12);
        // Trace row replaces row 0 (the (0,0) element's equation).
        for (int k = 0; k < d; ++k)
            trip.emplace_back(0, k * (d + 1), Complex(1, 0));
        for (int j = 0; j < n; ++j)
            for (int i = 1; i < n; ++i)
                if (L.data(i, j) != Complex(0, 0))
                    trip.emplace_back(i, j, L.data(i, j));
        M.setFromTriplets(trip.begin(), trip.end());
    }
    M.makeCompressed();

    Eigen::SparseLU<Eigen::SparseMatrix<Complex>> lu;
    lu.compute(M);
    if (lu.info() != Eigen::Success)
        throw DegenerateSteadyStateError("steady_state: trace-replaced system is singular");

    Vector b = Vector::Zero(n);
    b(0) = 1.0;
    Vector v = lu.solve(b);

    const double residual = (L.data * v).cwiseAbs().maxCoeff();
    if (!std::isfinite(residual) || residual > 1e-9)
        throw DegenerateSteadyStateError(
            "steady_state: residual " + std::to_string(residual) +
            " exceeds 1e-9 (degenerate or ill-conditioned Liouvillian)");

    Matrix rho = Eigen::Map<const Matrix>(v.data(), d, d);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    rho /= rho.trace().real();
    return rho;
}

inline Matrix steady_state(const LindbladModel& model) {
    return steady_state(build_liouvillian(model));
}

/// Steady-state expectation values Tr(O rho_ss) for each observable.
inline std::vector<Complex> expectation_ss(const LindbladModel& model,
                                           const std::vector<Matrix>& observables) {
    const Matrix rho = steady_state(model);
    std::vector<Complex> out;
    out.reserve(observables.size());
    for (const auto& obs : observables)
        out.push_back(expectation(obs, rho));
    return out;
}

} // namespace fcorr
