#pragma once

namespace seqent {

/// Numerical tolerances used across the library. Every default threshold
/// lives here; operations that accept a tolerance argument default to one of
/// these fields.
struct Tolerances {
    /// Cyclic Jacobi stops once the off-diagonal Frobenius norm drops below
    /// this fraction of the full Frobenius norm.
    double jacobi_offdiag = 1e-14;
    int jacobi_max_sweeps = 100;

    /// max |A - A^dagger| accepted as Hermitian.
    double hermitian = 1e-10;
    /// max |U^dagger U - I| accepted as unitary.
    double unitary = 1e-10;

    /// Density operator contract: Hermiticity, |tr - 1| and the eigenvalue
    /// floor all use this value.
    double state = 1e-10;

    /// Trace norms in [1, 1 + log_negativity_clamp] report zero entanglement.
    double log_negativity_clamp = 1e-12;
    /// Partial-transpose eigenvalues below -ppt are taken as entangled.
    double ppt = 1e-12;

    /// Slack on the E_CD >= 2^-x comparison used when counting pairs.
    double threshold_slack = 1e-12;

    /// Family parameters: normalization and the b2, b3 >= 0 floor.
    double family = 1e-12;
    /// Below this q = 1 - p the per-entry a_i are not exposed.
    double family_q_floor = 1e-12;
};

inline constexpr Tolerances kTol{};

}  // namespace seqent
