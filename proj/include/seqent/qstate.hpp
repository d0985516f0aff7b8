#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "seqent/errors.hpp"
#include "seqent/linalg.hpp"
#include "seqent/tolerances.hpp"

namespace seqent {

using Labels = std::vector<std::string>;

/// Which part of the density-operator contract failed, and by how much.
struct StateViolation {
    enum class Kind { NonFinite, NotHermitian, TraceNotOne, NotPositive };
    Kind kind;
    double magnitude;

    std::string describe() const {
        switch (kind) {
            case Kind::NonFinite: return "non-finite entry";
            case Kind::NotHermitian: return "not Hermitian (residual " + std::to_string(magnitude) + ")";
            case Kind::TraceNotOne: return "trace differs from 1 by " + std::to_string(magnitude);
            case Kind::NotPositive: return "negative eigenvalue of magnitude " + std::to_string(magnitude);
        }
        return "unknown violation";
    }
};

/// Empty optional means the matrix is a valid density matrix at `tol`.
/// Eigenvalues in (-tol, 0) count as zero.
inline std::optional<StateViolation> validate_matrix(const ComplexMatrix& m, double tol = kTol.state) {
    using Kind = StateViolation::Kind;
    if (!m.all_finite()) return StateViolation{Kind::NonFinite, 0.0};
    if (const double h = hermitian_residual(m); h >= tol) return StateViolation{Kind::NotHermitian, h};
    if (const double dt = std::abs(m.trace() - 1.0); dt >= tol) return StateViolation{Kind::TraceNotOne, dt};
    const double min_eig = hermitian_eig(m, tol).values.front();
    if (min_eig <= -tol) return StateViolation{Kind::NotPositive, -min_eig};
    return std::nullopt;
}

/// Multi-qubit density operator whose tensor factors carry names. Label i is
/// the i-th tensor factor from the left, i.e. the most significant bit of the
/// basis index.
///
/// Construction checks only structure (dim = 2^labels, unique labels). Use
/// `validate` or `DensityOp::checked` for the physical contract.
class DensityOp {
public:
    DensityOp(Labels labels, ComplexMatrix matrix) : labels_(std::move(labels)), matrix_(std::move(matrix)) {
        if (labels_.empty()) throw LabelError("DensityOp: at least one label required");
        if (labels_.size() > 4) throw SizeError("DensityOp: at most four qubits supported");
        if (matrix_.dim() != (std::size_t{1} << labels_.size()))
            throw SizeError("DensityOp: matrix dimension must be 2^(number of labels)");
        if (std::set<std::string>(labels_.begin(), labels_.end()).size() != labels_.size())
            throw LabelError("DensityOp: duplicate label");
    }

    static DensityOp checked(Labels labels, ComplexMatrix matrix, double tol = kTol.state) {
        DensityOp s(std::move(labels), std::move(matrix));
        if (auto v = validate_matrix(s.matrix_, tol)) throw ContractError("DensityOp: " + v->describe());
        return s;
    }

    const Labels& labels() const { return labels_; }
    const ComplexMatrix& matrix() const { return matrix_; }
    std::size_t qubits() const { return labels_.size(); }

    /// Position of `label` among the tensor factors.
    std::size_t index_of(const std::string& label) const {
        const auto it = std::find(labels_.begin(), labels_.end(), label);
        if (it == labels_.end()) throw LabelError("DensityOp: unknown label '" + label + "'");
        return static_cast<std::size_t>(it - labels_.begin());
    }

    /// Bit mask (over basis indices) covering the given labels.
    std::size_t mask_of(const std::vector<std::string>& part) const {
        std::size_t mask = 0;
        for (const auto& l : part) mask |= std::size_t{1} << (qubits() - 1 - index_of(l));
        return mask;
    }

private:
    Labels labels_;
    ComplexMatrix matrix_;
};

inline std::optional<StateViolation> validate(const DensityOp& s, double tol = kTol.state) {
    return validate_matrix(s.matrix(), tol);
}

namespace states {

inline DensityOp ket0(const std::string& label) { return DensityOp({label}, ComplexMatrix{{1.0, 0.0}, {0.0, 0.0}}); }

/// |phi+><phi+| with (|00> + |11>)/sqrt(2).
inline DensityOp bell(const std::string& first = "A", const std::string& second = "B") {
    ComplexMatrix m(4);
    m(0, 0) = m(0, 3) = m(3, 0) = m(3, 3) = 0.5;
    return DensityOp({first, second}, std::move(m));
}

inline DensityOp maximally_mixed(Labels labels) {
    const std::size_t dim = std::size_t{1} << labels.size();
    return DensityOp(std::move(labels), ComplexMatrix::identity(dim) * Complex(1.0 / static_cast<double>(dim)));
}

}  // namespace states

/// a (x) b with labels concatenated.
inline DensityOp tensor(const DensityOp& a, const DensityOp& b) {
    Labels labels = a.labels();
    for (const auto& l : b.labels()) {
        if (std::find(labels.begin(), labels.end(), l) != labels.end())
            throw LabelError("tensor: label '" + l + "' appears in both operands");
        labels.push_back(l);
    }
    return DensityOp(std::move(labels), kron(a.matrix(), b.matrix()));
}

namespace detail {

// Packs the bits of `index` not in `drop_mask` into a dense index, keeping order.
inline std::size_t compress_bits(std::size_t index, std::size_t drop_mask, std::size_t nbits) {
    std::size_t out = 0;
    for (std::size_t b = nbits; b-- > 0;) {
        const std::size_t bit = std::size_t{1} << b;
        if (drop_mask & bit) continue;
        out = (out << 1) | ((index & bit) ? 1u : 0u);
    }
    return out;
}

}  // namespace detail

/// Reduced state on the labels not in `drop`, in their original order.
inline DensityOp partial_trace(const DensityOp& s, const std::vector<std::string>& drop) {
    const std::size_t n = s.qubits();
    const std::size_t mask = s.mask_of(drop);
    const auto dropped = static_cast<std::size_t>(std::popcount(mask));
    if (dropped == n) throw LabelError("partial_trace: cannot trace out every subsystem");
    if (dropped == 0) return s;

    Labels kept;
    for (std::size_t i = 0; i < n; ++i)
        if (!(mask & (std::size_t{1} << (n - 1 - i)))) kept.push_back(s.labels()[i]);

    const std::size_t dim = s.matrix().dim();
    ComplexMatrix out(std::size_t{1} << kept.size());
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
            if ((i & mask) != (j & mask)) continue;
            out(detail::compress_bits(i, mask, n), detail::compress_bits(j, mask, n)) += s.matrix()(i, j);
        }
    return DensityOp(std::move(kept), std::move(out));
}

/// Transpose on the tensor factors named in `part`. The result need not be
/// positive, so it is returned as a bare matrix.
inline ComplexMatrix partial_transpose(const DensityOp& s, const std::vector<std::string>& part) {
    if (part.empty()) throw LabelError("partial_transpose: empty part");
    const std::size_t mask = s.mask_of(part);
    const std::size_t dim = s.matrix().dim();
    ComplexMatrix out(dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
            const std::size_t ti = (i & ~mask) | (j & mask);
            const std::size_t tj = (j & ~mask) | (i & mask);
            out(ti, tj) = s.matrix()(i, j);
        }
    return out;
}

}  // namespace seqent
