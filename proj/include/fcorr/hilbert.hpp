#pragma once

// Dense operator algebra over small composite Hilbert spaces.
// Slot ordering convention: [emitter, sensor_1, sensor_2].

#include <complex>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "fcorr/errors.hpp"

namespace fcorr {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Ordered tensor-product structure, e.g. {2, 3, 3} for a two-level
/// emitter and two sensors truncated at two photons.
struct HilbertSpace {
    std::vector<int> dims;

    HilbertSpace() = default;
    HilbertSpace(std::initializer_list<int> d) : dims(d) { validate(); }
    explicit HilbertSpace(std::vector<int> d) : dims(std::move(d)) { validate(); }

    int total() const {
        return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<int>());
    }

    void validate() const {
        if (dims.empty())
            throw DimensionError("HilbertSpace: no subsystems");
        for (int d : dims)
            if (d < 2)
                throw DimensionError("HilbertSpace: subsystem dimension < 2");
    }

    bool operator==(const HilbertSpace&) const = default;
};

inline Matrix identity(int dim) { return Matrix::Identity(dim, dim); }

/// Bosonic lowering operator on a truncated Fock space:
/// A[n-1, n] = sqrt(n) for 1 <= n < dim.
inline Matrix annihilation(int dim) {
    if (dim < 2)
        throw DimensionError("annihilation: dim must be >= 2");
    Matrix a = Matrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n)
        a(n - 1, n) = std::sqrt(double(n));
    return a;
}

/// Two-level lowering operator |g><e| with basis {|g>, |e>}.
inline Matrix sigma_minus() {
    Matrix s = Matrix::Zero(2, 2);
    s(0, 1) = 1.0;
    return s;
}

inline Matrix dagger(const Matrix& a) { return a.adjoint(); }

/// id (x) ... (x) op (x) ... (x) id with op placed at `slot`.
inline Matrix embed(const Matrix& op, int slot, const HilbertSpace& space) {
    const int nslots = int(space.dims.size());
    if (slot < 0 || slot >= nslots)
        throw DimensionError("embed: slot out of range");
    if (op.rows() != op.cols() || op.rows() != space.dims[slot])
        throw DimensionError("embed: operator does not match subsystem dimension");

    Matrix out = Matrix::Identity(1, 1);
    for (int k = 0; k < nslots; ++k) {
        const Matrix& factor = (k == slot) ? op : identity(space.dims[k]);
        Matrix next(out.rows() * factor.rows(), out.cols() * factor.cols());
        for (int i = 0; i < out.rows(); ++i)
            for (int j = 0; j < out.cols(); ++j)
                next.block(i * factor.rows(), j * factor.cols(),
                           factor.rows(), factor.cols()) = out(i, j) * factor;
        out.swap(next);
    }
    return out;
}

/// Tr(A rho).
inline Complex expectation(const Matrix& a, const Matrix& rho) {
    if (a.rows() != rho.rows() || a.cols() != rho.cols())
        throw DimensionError("expectation: dimension mismatch");
    return (a * rho).trace();
}

} // namespace fcorr
