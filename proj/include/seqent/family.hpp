#pragma once

// Two-qubit states of the form
//
//     rho = p |phi+><phi+| + (1 - p) diag(a1, a2, a3, a4),
//
// which the XX+YY protocol maps back into itself. Parameters are stored as
// b_i = a_i (1 - p) so that p = 1 (the Bell state) needs no division.

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "seqent/entanglement.hpp"
#include "seqent/errors.hpp"
#include "seqent/linalg.hpp"
#include "seqent/protocol.hpp"
#include "seqent/qstate.hpp"
#include "seqent/tolerances.hpp"
#include "seqent/unitary.hpp"

namespace seqent {

struct FamilyParams {
    double p = 1.0;
    std::array<double, 4> b{};  // b_i = a_i (1 - p)

    static FamilyParams bell() { return {1.0, {0.0, 0.0, 0.0, 0.0}}; }

    double q() const { return 1.0 - p; }

    /// b4 + p/2, the |11><11| diagonal entry of the state.
    double x_term() const { return b[3] + 0.5 * p; }

    /// The per-entry weights a_i, when q is large enough to divide by.
    std::optional<std::array<double, 4>> a() const {
        if (q() <= kTol.family_q_floor) return std::nullopt;
        return std::array<double, 4>{b[0] / q(), b[1] / q(), b[2] / q(), b[3] / q()};
    }
};

namespace detail {

inline ComplexMatrix family_matrix(const FamilyParams& f) {
    ComplexMatrix m(4);
    for (std::size_t i = 0; i < 4; ++i) m(i, i) = f.b[i];
    m(0, 0) += 0.5 * f.p;
    m(3, 3) += 0.5 * f.p;
    m(0, 3) = m(3, 0) = 0.5 * f.p;
    return m;
}

inline double require_q(const FamilyParams& f, const char* who) {
    if (!std::isfinite(f.p) || f.q() <= kTol.family_q_floor)
        throw UndefinedQuantity(std::string(who) + ": needs p < 1 (the quantity carries a 1/(1-p) factor)");
    return f.q();
}

inline double cos2_of(double t) { return std::cos(2.0 * t) * std::cos(2.0 * t); }
inline double sin2_of(double t) { return std::sin(2.0 * t) * std::sin(2.0 * t); }

}  // namespace detail

/// Empty when `f` satisfies the family constraints: 0 <= p <= 1, b normalized,
/// b2, b3 >= 0, and the reconstructed matrix is a valid state.
inline std::optional<std::string> validate_family(const FamilyParams& f) {
    if (!std::isfinite(f.p) || f.p < -kTol.family || f.p > 1.0 + kTol.family) return "p outside [0, 1]";
    for (double bi : f.b)
        if (!std::isfinite(bi)) return "non-finite b";
    const double sum = f.b[0] + f.b[1] + f.b[2] + f.b[3];
    if (std::abs(sum - f.q()) > kTol.family) return "b1 + b2 + b3 + b4 != 1 - p";
    if (f.b[1] < -kTol.family) return "b2 < 0";
    if (f.b[2] < -kTol.family) return "b3 < 0";
    if (auto v = validate_matrix(detail::family_matrix(f))) return "not a state: " + v->describe();
    return std::nullopt;
}

inline DensityOp family_to_density(const FamilyParams& f) {
    if (auto v = validate_family(f)) throw ContractError("family_to_density: " + *v);
    return DensityOp({"A", "B"}, detail::family_matrix(f));
}

/// Parameters of the A-B state after one XX+YY round at strength t.
inline FamilyParams recurrence_step(const FamilyParams& f, double t) {
    if (auto v = validate_family(f)) throw ContractError("recurrence_step: " + *v);
    const double c2 = detail::cos2_of(t), s2 = detail::sin2_of(t);
    const double x = f.x_term();
    FamilyParams next;
    next.p = f.p * c2;
    next.b[3] = x * c2 * c2 - 0.5 * next.p;
    next.b[1] = (f.b[1] + x * s2) * c2;
    next.b[2] = (f.b[2] + x * s2) * c2;
    next.b[0] = f.b[0] + 0.5 * f.p + (f.b[1] + f.b[2]) * s2 + x * s2 * s2 - 0.5 * next.p;
    return next;
}

/// The C-D state extracted in one XX+YY round at strength t, written in the
/// same family form. The extracted state carries a local phase
/// diag(1, -i) (x) diag(1, -i) relative to this form, which does not change
/// any entanglement measure.
inline FamilyParams transfer_family(const FamilyParams& f, double t) {
    if (auto v = validate_family(f)) throw ContractError("transfer_family: " + *v);
    const double c2 = detail::cos2_of(t), s2 = detail::sin2_of(t);
    const double x = f.x_term();
    FamilyParams cd;
    cd.p = f.p * s2;
    cd.b[1] = s2 * (f.b[1] + c2 * x);
    cd.b[2] = s2 * (f.b[2] + c2 * x);
    cd.b[3] = s2 * s2 * x - 0.5 * cd.p;
    cd.b[0] = 1.0 - cd.p - cd.b[1] - cd.b[2] - cd.b[3];
    return cd;
}

/// PPT condition on the family: entangled iff b2 b3 < (p/2)^2, which is
/// a2 a3 < [p / (2(1 - p))]^2 when p < 1.
inline bool is_family_entangled(const FamilyParams& f) {
    if (auto v = validate_family(f)) throw ContractError("is_family_entangled: " + *v);
    if (f.p >= 1.0) return true;
    return f.b[1] * f.b[2] < 0.25 * f.p * f.p;
}

/// chi = [2 a4 + p/(1-p)] cos^2(2t). Requires p < 1 and cos(2t) != 0.
inline double chi(const FamilyParams& f, double t) {
    const double q = detail::require_q(f, "chi");
    if (std::abs(std::cos(2.0 * t)) <= kTol.family) throw UndefinedQuantity("chi: cos(2t) = 0");
    const double c2 = detail::cos2_of(t);
    return (2.0 * f.b[3] / q + f.p / q) * c2;
}

/// xi = chi (1 - cos^2(2t) sin^2(2t)) / cos^2(2t).
inline double xi(const FamilyParams& f, double t) {
    const double c2 = detail::cos2_of(t), s2 = detail::sin2_of(t);
    return chi(f, t) * (1.0 - c2 * s2) / c2;
}

/// [2 a2 + xi][2 a3 + xi] - [p/(1-p)]^2. Negative iff the pair two rounds
/// after `f` (the one fed by the state following `f`) ends up entangled.
inline double theorem_condition(const FamilyParams& f, double t) {
    const double q = detail::require_q(f, "theorem_condition");
    const double x = xi(f, t);
    const double ratio = f.p / q;
    return (2.0 * f.b[1] / q + x) * (2.0 * f.b[2] / q + x) - ratio * ratio;
}

/// Same shape as theorem_condition with chi in place of xi: negative iff the
/// very next pair ends up entangled.
inline double next_pair_condition(const FamilyParams& f, double t) {
    const double q = detail::require_q(f, "next_pair_condition");
    const double x = chi(f, t);
    const double ratio = f.p / q;
    return (2.0 * f.b[1] / q + x) * (2.0 * f.b[2] / q + x) - ratio * ratio;
}

struct RemarkConditions {
    bool cond_a4;   // a4 < p / (2(p - 1)), i.e. b4 + p/2 < 0
    bool cond_sin;  // sin^2(2t) < (1-p)(a2 + a3) / |a4 (1-p) + p/2|
};

/// Conditions for the branch where b4 + p/2 starts negative. Note b4 + p/2 is
/// the |11><11| entry of the state, so a valid family member never satisfies
/// cond_a4; the formulas are still evaluated as written.
inline RemarkConditions remark_conditions(const FamilyParams& f, double t) {
    const double q = detail::require_q(f, "remark_conditions");
    const double a4 = f.b[3] / q;
    const bool cond_a4 = a4 < f.p / (2.0 * (f.p - 1.0));
    const double weight = f.b[1] + f.b[2];  // (1-p)(a2 + a3)
    const double denom = std::abs(f.x_term());
    bool cond_sin;
    if (denom == 0.0)
        cond_sin = weight > 0.0;
    else
        cond_sin = detail::sin2_of(t) < weight / denom;
    return {cond_a4, cond_sin};
}

struct RoundCheck {
    std::size_t round;
    double e_cd;               // simulated log-negativity of rho_CD
    double min_pt_eigenvalue;  // of the simulated rho_CD
    bool family_entangled;
    bool simulated_entangled;
    std::optional<double> margin;  // theorem_condition two rounds back, when p < 1 there
    double drift;                  // max |family state - simulated rho_AB| after this round
};

struct TheoremCertificate {
    double t;
    std::size_t rounds_checked;
    std::vector<RoundCheck> rounds;
};

struct TheoremFailure {
    std::size_t round;
    std::string reason;
    std::vector<RoundCheck> rounds;  // includes the failing round
};

using TheoremOutcome = std::variant<TheoremCertificate, TheoremFailure>;

inline constexpr double kFamilyDriftTol = 1e-9;

/// Checks that each of the first `n_target` pairs ends up entangled when the
/// Bell state is tapped with XX+YY at strength t.
///
/// Every round is checked three ways: the family PPT inequality on the
/// predicted C-D parameters, the partial transpose of the C-D state from the
/// full 16x16 simulation (must be below -kTol.ppt with nonzero
/// log-negativity), and, once p < 1 two rounds back, the sign of
/// theorem_condition. The family state is also compared against the simulated
/// A-B state each round.
inline TheoremOutcome verify_theorem(std::size_t n_target, double t) {
    if (!std::isfinite(t) || t < 0.0 || t >= std::numbers::pi / 4)
        throw ContractError("verify_theorem: t must lie in [0, pi/4)");
    if (n_target == 0) throw ContractError("verify_theorem: n_target must be positive");

    const ComplexMatrix u = build_xxyy({t});
    std::vector<FamilyParams> history{FamilyParams::bell()};
    DensityOp rho_ab = states::bell();
    std::vector<RoundCheck> rounds;
    rounds.reserve(n_target);

    for (std::size_t k = 1; k <= n_target; ++k) {
        const FamilyParams& prev = history.back();
        const bool family_ent = is_family_entangled(transfer_family(prev, t));

        StepResult s = step(rho_ab, u);
        const EntanglementValue ev = log_negativity(s.rho_cd, {"C"});
        const bool sim_ent = ev.min_pt_eigenvalue < -kTol.ppt && ev.log_negativity > 0.0;

        std::optional<double> margin;
        if (k >= 2 && history[k - 2].q() > kTol.family_q_floor) margin = theorem_condition(history[k - 2], t);

        FamilyParams next = recurrence_step(prev, t);
        const double drift = max_abs_diff(detail::family_matrix(next), s.rho_ab_next.matrix());
        rounds.push_back({k, ev.log_negativity, ev.min_pt_eigenvalue, family_ent, sim_ent, margin, drift});

        std::string reason;
        if (!sim_ent) reason = "simulated C-D state is not detectably entangled";
        else if (!family_ent) reason = "family PPT inequality fails";
        else if (margin && *margin >= 0.0) reason = "two-round condition is not negative";
        else if (drift > kFamilyDriftTol) reason = "family recurrence drifted from simulation";
        if (!reason.empty()) return TheoremFailure{k, std::move(reason), std::move(rounds)};

        history.push_back(next);
        rho_ab = std::move(s.rho_ab_next);
    }
    return TheoremCertificate{t, n_target, std::move(rounds)};
}

inline bool theorem_holds(std::size_t n_target, double t) {
    return std::holds_alternative<TheoremCertificate>(verify_theorem(n_target, t));
}

inline constexpr double kFindTMax = std::numbers::pi / 8;

/// Largest interaction strength in (0, pi/8] found to certify `n_target`
/// rounds. Probes pi/8, pi/16, ... until one certifies, then bisects between
/// it and the failing grid point above it.
inline std::optional<double> find_t(std::size_t n_target, int grid_depth = 60, int bisections = 60) {
    if (n_target == 0) throw ContractError("find_t: n_target must be positive");
    if (theorem_holds(n_target, kFindTMax)) return kFindTMax;
    double hi = kFindTMax;
    for (int k = 1; k <= grid_depth; ++k) {
        const double lo = kFindTMax * std::exp2(-k);
        if (!theorem_holds(n_target, lo)) {
            hi = lo;
            continue;
        }
        double good = lo, bad = hi;
        for (int i = 0; i < bisections && bad - good > 1e-15 * bad; ++i) {
            const double mid = 0.5 * (good + bad);
            (theorem_holds(n_target, mid) ? good : bad) = mid;
        }
        return good;
    }
    return std::nullopt;
}

}  // namespace seqent
