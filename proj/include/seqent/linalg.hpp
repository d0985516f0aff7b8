#pragma once

// Dense complex matrices sized for a handful of qubits (dimension <= 16):
// products, Kronecker products, a cyclic Jacobi Hermitian eigensolver and
// the functions built on it.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "seqent/errors.hpp"
#include "seqent/tolerances.hpp"

namespace seqent {

using Complex = std::complex<double>;

inline constexpr std::size_t kMaxDim = 16;

/// Square, row-major, dense complex matrix.
class ComplexMatrix {
public:
    ComplexMatrix() = default;

    explicit ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {
        if (dim == 0) throw SizeError("ComplexMatrix: dimension must be positive");
    }

    ComplexMatrix(std::size_t dim, std::vector<Complex> entries) : dim_(dim), data_(std::move(entries)) {
        if (dim == 0) throw SizeError("ComplexMatrix: dimension must be positive");
        if (data_.size() != dim * dim) throw SizeError("ComplexMatrix: entry count must equal dim^2");
    }

    /// Row-wise nested initializer, e.g. {{0, 1}, {1, 0}}.
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) : dim_(rows.size()) {
        if (dim_ == 0) throw SizeError("ComplexMatrix: dimension must be positive");
        data_.reserve(dim_ * dim_);
        for (const auto& row : rows) {
            if (row.size() != dim_) throw SizeError("ComplexMatrix: ragged initializer");
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static ComplexMatrix identity(std::size_t dim) {
        ComplexMatrix m(dim);
        for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    static ComplexMatrix diagonal(std::span<const double> values) {
        ComplexMatrix m(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
        return m;
    }

    std::size_t dim() const { return dim_; }
    std::span<const Complex> entries() const { return data_; }

    Complex& operator()(std::size_t row, std::size_t col) { return data_[row * dim_ + col]; }
    const Complex& operator()(std::size_t row, std::size_t col) const { return data_[row * dim_ + col]; }

    ComplexMatrix adjoint() const {
        ComplexMatrix out(dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j) out(j, i) = std::conj((*this)(i, j));
        return out;
    }

    ComplexMatrix transpose() const {
        ComplexMatrix out(dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j) out(j, i) = (*this)(i, j);
        return out;
    }

    Complex trace() const {
        Complex t = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
        return t;
    }

    /// Largest entry modulus.
    double max_abs() const {
        double m = 0.0;
        for (const auto& z : data_) m = std::max(m, std::abs(z));
        return m;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& z : data_) s += std::norm(z);
        return std::sqrt(s);
    }

    bool all_finite() const {
        return std::all_of(data_.begin(), data_.end(),
                           [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
    }

    ComplexMatrix& operator+=(const ComplexMatrix& rhs) {
        require_same_dim(rhs);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
        return *this;
    }

    ComplexMatrix& operator-=(const ComplexMatrix& rhs) {
        require_same_dim(rhs);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
        return *this;
    }

    ComplexMatrix& operator*=(Complex scale) {
        for (auto& z : data_) z *= scale;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
    friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
    friend ComplexMatrix operator*(ComplexMatrix lhs, Complex scale) { return lhs *= scale; }
    friend ComplexMatrix operator*(Complex scale, ComplexMatrix rhs) { return rhs *= scale; }

    friend ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
        lhs.require_same_dim(rhs);
        const std::size_t n = lhs.dim_;
        ComplexMatrix out(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                const Complex a = lhs(i, k);
                if (a == Complex{}) continue;
                for (std::size_t j = 0; j < n; ++j) out(i, j) += a * rhs(k, j);
            }
        return out;
    }

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    void require_same_dim(const ComplexMatrix& rhs) const {
        if (rhs.dim_ != dim_) throw SizeError("ComplexMatrix: dimension mismatch");
    }

    std::size_t dim_ = 0;
    std::vector<Complex> data_;
};

/// max |a - b| over entries.
inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) throw SizeError("max_abs_diff: dimension mismatch");
    double m = 0.0;
    for (std::size_t k = 0; k < a.entries().size(); ++k) m = std::max(m, std::abs(a.entries()[k] - b.entries()[k]));
    return m;
}

inline double hermitian_residual(const ComplexMatrix& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = i; j < a.dim(); ++j) m = std::max(m, std::abs(a(i, j) - std::conj(a(j, i))));
    return m;
}

inline bool is_hermitian(const ComplexMatrix& a, double tol = kTol.hermitian) { return hermitian_residual(a) < tol; }

/// max |A^dagger A - I|.
inline double unitary_residual(const ComplexMatrix& a) {
    return max_abs_diff(a.adjoint() * a, ComplexMatrix::identity(a.dim()));
}

inline bool is_unitary(const ComplexMatrix& a, double tol = kTol.unitary) { return unitary_residual(a) < tol; }

/// Kronecker product: entry [(i*b+k), (j*b+l)] = a[i,j] * b[k,l].
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t na = a.dim(), nb = b.dim();
    if (na == 0 || nb == 0) throw SizeError("kron: empty operand");
    if (nb > std::numeric_limits<std::size_t>::max() / na)
        throw SizeError("kron: dimension product overflows");
    const std::size_t n = na * nb;
    if (n > std::numeric_limits<std::size_t>::max() / n) throw SizeError("kron: entry count overflows");
    ComplexMatrix out(n);
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < na; ++j) {
            const Complex aij = a(i, j);
            if (aij == Complex{}) continue;
            for (std::size_t k = 0; k < nb; ++k)
                for (std::size_t l = 0; l < nb; ++l) out(i * nb + k, j * nb + l) = aij * b(k, l);
        }
    return out;
}

/// u * m * u^dagger.
inline ComplexMatrix conjugate_by(const ComplexMatrix& u, const ComplexMatrix& m) { return u * m * u.adjoint(); }

struct HermitianEigen {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // column k pairs with values[k]
};

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix.
///
/// Each rotation zeroes one off-diagonal pair after a phase change that makes
/// it real. Sweeps continue until the off-diagonal Frobenius norm is below
/// `kTol.jacobi_offdiag` times the Frobenius norm of the input. Eigenvalues
/// come back ascending; equal values keep their diagonal order.
inline HermitianEigen hermitian_eig(const ComplexMatrix& input, double tol = kTol.hermitian) {
    const std::size_t n = input.dim();
    if (n == 0 || n > kMaxDim) throw SizeError("hermitian_eig: dimension must be in [1, 16]");
    if (!input.all_finite()) throw ContractError("hermitian_eig: non-finite entry");
    if (!is_hermitian(input, tol))
        throw ContractError("hermitian_eig: input is not Hermitian (residual " + std::to_string(hermitian_residual(input)) +
                            ")");

    // Work on the exactly Hermitian part so round-off in the input cannot drive
    // the rotations.
    ComplexMatrix a(n);
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = input(i, i).real();
        for (std::size_t j = i + 1; j < n; ++j) {
            a(i, j) = 0.5 * (input(i, j) + std::conj(input(j, i)));
            a(j, i) = std::conj(a(i, j));
        }
    }
    ComplexMatrix v = ComplexMatrix::identity(n);

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) s += std::norm(a(i, j));
        return std::sqrt(s);
    };

    const double scale = a.frobenius_norm();
    const double target = kTol.jacobi_offdiag * scale;

    for (int sweep = 0; sweep < kTol.jacobi_max_sweeps && off_norm() > target; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double g = std::abs(apq);
                if (g == 0.0) continue;
                const Complex phase = apq / g;  // e^{i phi}
                const double app = a(p, p).real(), aqq = a(q, q).real();
                const double theta = (aqq - app) / (2.0 * g);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                // J = diag(1, e^{-i phi}) * [[c, s], [-s, c]] on the (p, q) plane.
                const Complex jpp = c, jpq = s;
                const Complex jqp = -s * std::conj(phase), jqq = c * std::conj(phase);

                for (std::size_t k = 0; k < n; ++k) {  // A <- A J
                    const Complex akp = a(k, p), akq = a(k, q);
                    a(k, p) = akp * jpp + akq * jqp;
                    a(k, q) = akp * jpq + akq * jqq;
                }
                for (std::size_t k = 0; k < n; ++k) {  // A <- J^dagger A
                    const Complex apk = a(p, k), aqk = a(q, k);
                    a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
                    a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {  // V <- V J
                    const Complex vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = vkp * jpp + vkq * jqp;
                    v(k, q) = vkp * jpq + vkq * jqq;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

    HermitianEigen out{std::vector<double>(n), ComplexMatrix(n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a, double tol = kTol.hermitian) {
    return hermitian_eig(a, tol).values;
}

/// exp(-i * theta * h) for Hermitian h.
inline ComplexMatrix expm_i_hermitian(const ComplexMatrix& h, double theta) {
    const auto eig = hermitian_eig(h);
    const std::size_t n = h.dim();
    ComplexMatrix scaled = eig.vectors;
    for (std::size_t k = 0; k < n; ++k) {
        const Complex phase = std::exp(Complex(0.0, -theta * eig.values[k]));
        for (std::size_t i = 0; i < n; ++i) scaled(i, k) *= phase;
    }
    return scaled * eig.vectors.adjoint();
}

/// Sum of |eigenvalue| of a Hermitian matrix.
inline double trace_norm_hermitian(const ComplexMatrix& a) {
    double s = 0.0;
    for (double lambda : hermitian_eigenvalues(a)) s += std::abs(lambda);
    return s;
}

namespace pauli {

inline ComplexMatrix identity() { return ComplexMatrix::identity(2); }
inline ComplexMatrix x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
inline ComplexMatrix y() { return {{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}}; }
inline ComplexMatrix z() { return {{1.0, 0.0}, {0.0, -1.0}}; }

/// I, X, Y, Z by index 0..3.
inline ComplexMatrix by_index(int k) {
    switch (k) {
        case 0: return identity();
        case 1: return x();
        case 2: return y();
        case 3: return z();
        default: throw std::out_of_range("pauli::by_index: index must be in [0, 3]");
    }
}

}  // namespace pauli

}  // namespace seqent
