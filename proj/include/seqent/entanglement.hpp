#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "seqent/errors.hpp"
#include "seqent/linalg.hpp"
#include "seqent/qstate.hpp"
#include "seqent/tolerances.hpp"

namespace seqent {

struct EntanglementValue {
    double log_negativity;     // ebits
    double min_pt_eigenvalue;  // smallest eigenvalue of the partial transpose
};

/// log2 of the trace norm of a partial-transposed matrix, plus the smallest
/// eigenvalue. Trace norms within `kTol.log_negativity_clamp` of 1 give 0.
inline EntanglementValue log_negativity_of_pt(const ComplexMatrix& pt) {
    const auto values = hermitian_eigenvalues(pt);
    double norm = 0.0;
    for (double v : values) norm += std::abs(v);
    const double ln = norm <= 1.0 + kTol.log_negativity_clamp ? 0.0 : std::log2(norm);
    return {ln, values.front()};
}

/// Logarithmic negativity of `s` across the cut (part | rest).
inline EntanglementValue log_negativity(const DensityOp& s, const std::vector<std::string>& part) {
    if (part.empty() || part.size() >= s.qubits())
        throw LabelError("log_negativity: part must be a proper nonempty subset of the labels");
    if (auto v = validate(s)) throw ContractError("log_negativity: " + v->describe());
    return log_negativity_of_pt(partial_transpose(s, part));
}

/// Two-qubit PPT test: entangled iff the partial transpose has an eigenvalue
/// below -tol. For two qubits this is exact (Peres-Horodecki).
inline bool is_ppt_entangled(const DensityOp& s, const std::vector<std::string>& part, double tol = kTol.ppt) {
    if (s.qubits() != 2) throw UnsupportedCase("is_ppt_entangled: defined for two-qubit states only");
    if (part.size() != 1) throw LabelError("is_ppt_entangled: part must name exactly one of the two qubits");
    return hermitian_eigenvalues(partial_transpose(s, part)).front() < -tol;
}

}  // namespace seqent
