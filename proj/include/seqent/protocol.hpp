#pragma once

// Sequential transfer: each round a fresh |0>_C |0>_D pair couples to the
// shared A-B state through U on (C, A) and the same U on (B, D). The pair
// leaves with rho_CD and A-B keep the remainder.

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "seqent/entanglement.hpp"
#include "seqent/errors.hpp"
#include "seqent/linalg.hpp"
#include "seqent/qstate.hpp"
#include "seqent/tolerances.hpp"
#include "seqent/unitary.hpp"

namespace seqent {

inline constexpr std::size_t kDefaultRoundCap = 10000;

struct ProtocolConfig {
    DensityOp initial_ab = states::bell("A", "B");
    UnitarySpec unitary = XXYYSpec{};
    std::size_t max_rounds = kDefaultRoundCap;
    double threshold_exponent = 0.0;  // x, threshold 2^-x
    std::size_t round_cap = kDefaultRoundCap;
};

struct RoundRecord {
    std::size_t n;  // 1-based
    double e_cd;
    double e_ab;
    DensityOp rho_ab;  // after round n
};

struct ProtocolTrace {
    ProtocolConfig config;
    std::vector<RoundRecord> records;
};

struct StepResult {
    DensityOp rho_ab_next;
    DensityOp rho_cd;
};

namespace detail {

inline void require_ab(const DensityOp& rho_ab) {
    if (rho_ab.labels() != Labels{"A", "B"}) throw LabelError("protocol: shared state must carry labels (A, B)");
    if (auto v = validate(rho_ab)) throw ContractError("protocol: invalid A-B state: " + v->describe());
}

inline void require_gate(const ComplexMatrix& u) {
    if (u.dim() != 4) throw SizeError("protocol: interaction unitary must be 4x4");
    if (auto c = check_unitary(u); !c.ok)
        throw ContractError("protocol: interaction is not unitary (residual " + std::to_string(c.residual) + ")");
}

}  // namespace detail

/// (U_CA (x) U_BD)(|0><0|_C (x) rho_AB (x) |0><0|_D)(...)^dagger on (C, A, B, D).
inline DensityOp joint_state(const DensityOp& rho_ab, const ComplexMatrix& u) {
    detail::require_ab(rho_ab);
    detail::require_gate(u);
    const DensityOp before = tensor(tensor(states::ket0("C"), rho_ab), states::ket0("D"));
    return DensityOp(before.labels(), conjugate_by(kron(u, u), before.matrix()));
}

/// One round on the full 16x16 joint state.
inline StepResult step(const DensityOp& rho_ab, const ComplexMatrix& u) {
    const DensityOp joint = joint_state(rho_ab, u);
    StepResult out{partial_trace(joint, {"C", "D"}), partial_trace(joint, {"A", "B"})};
    if (auto v = validate(out.rho_ab_next)) throw ContractError("step: produced invalid A-B state: " + v->describe());
    if (auto v = validate(out.rho_cd)) throw ContractError("step: produced invalid C-D state: " + v->describe());
    return out;
}

/// The two marginal maps of one round, rho_AB -> rho_AB' and rho_AB -> rho_CD,
/// as Kraus operators read off from U. Equivalent to `step` without forming
/// the 16x16 joint state.
class TransferChannel {
public:
    explicit TransferChannel(const ComplexMatrix& u) {
        detail::require_gate(u);
        // U_CA maps |0>_C|a>_A to sum U[2c + a', a] |c>_C|a'>_A; U_BD maps
        // |b>_B|0>_D to sum U[2b' + d, 2b] |b'>_B|d>_D.
        for (std::size_t traced = 0; traced < 2; ++traced) {
            ComplexMatrix a_keep(2), a_move(2), b_keep(2), b_move(2);
            for (std::size_t out = 0; out < 2; ++out)
                for (std::size_t in = 0; in < 2; ++in) {
                    a_keep(out, in) = u(2 * traced + out, in);      // C traced, A kept
                    a_move(out, in) = u(2 * out + traced, in);      // A traced, C kept
                    b_keep(out, in) = u(2 * out + traced, 2 * in);  // D traced, B kept
                    b_move(out, in) = u(2 * traced + out, 2 * in);  // B traced, D kept
                }
            side_a_keep_[traced] = std::move(a_keep);
            side_a_move_[traced] = std::move(a_move);
            side_b_keep_[traced] = std::move(b_keep);
            side_b_move_[traced] = std::move(b_move);
        }
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) {
                ab_kraus_[2 * i + j] = kron(side_a_keep_[i], side_b_keep_[j]);
                cd_kraus_[2 * i + j] = kron(side_a_move_[i], side_b_move_[j]);
            }
    }

    ComplexMatrix next_ab(const ComplexMatrix& rho_ab) const { return apply(ab_kraus_, rho_ab); }
    ComplexMatrix extracted_cd(const ComplexMatrix& rho_ab) const { return apply(cd_kraus_, rho_ab); }

private:
    static ComplexMatrix apply(const std::array<ComplexMatrix, 4>& kraus, const ComplexMatrix& rho) {
        ComplexMatrix out(4);
        for (const auto& k : kraus) out += conjugate_by(k, rho);
        return out;
    }

    std::array<ComplexMatrix, 2> side_a_keep_, side_a_move_, side_b_keep_, side_b_move_;
    std::array<ComplexMatrix, 4> ab_kraus_, cd_kraus_;
};

/// Runs `rounds` rounds with the configured unitary from the initial state.
inline ProtocolTrace run(const ProtocolConfig& config, std::size_t rounds) {
    if (config.max_rounds > config.round_cap)
        throw CapExceeded("run: max_rounds " + std::to_string(config.max_rounds) + " exceeds cap " +
                          std::to_string(config.round_cap));
    if (rounds == 0) throw std::invalid_argument("run: rounds must be positive");
    if (rounds > config.max_rounds)
        throw CapExceeded("run: " + std::to_string(rounds) + " rounds exceeds max_rounds " +
                          std::to_string(config.max_rounds));
    detail::require_ab(config.initial_ab);

    const ComplexMatrix u = build_unitary(config.unitary);
    ProtocolTrace trace{config, {}};
    trace.records.reserve(rounds);
    DensityOp rho_ab = config.initial_ab;
    for (std::size_t n = 1; n <= rounds; ++n) {
        StepResult s = step(rho_ab, u);
        const double e_cd = log_negativity(s.rho_cd, {"C"}).log_negativity;
        const double e_ab = log_negativity(s.rho_ab_next, {"A"}).log_negativity;
        rho_ab = std::move(s.rho_ab_next);
        trace.records.push_back(RoundRecord{n, e_cd, e_ab, rho_ab});
    }
    return trace;
}

struct CountResult {
    std::size_t n;        // consecutive rounds with E_CD >= 2^-x, from round 1
    bool saturated;       // reached the cap without a failing round
    double failing_e_cd;  // E_CD at round n + 1; 0 when saturated
    double failing_min_pt_eigenvalue;  // of rho_CD at round n + 1; 0 when saturated
};

/// Counts the leading rounds whose pair receives at least 2^-x ebits,
/// starting from the Bell state. Stops at the first failing round.
inline CountResult count_pairs(const ComplexMatrix& u, double x, std::size_t cap,
                               const ComplexMatrix& initial_ab = states::bell().matrix()) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw std::invalid_argument("count_pairs: x must be finite and >= 0");
    const TransferChannel channel(u);
    const double threshold = std::exp2(-x) - kTol.threshold_slack;
    ComplexMatrix rho = initial_ab;
    for (std::size_t n = 0; n < cap; ++n) {
        const ComplexMatrix cd = channel.extracted_cd(rho);
        const auto e = log_negativity_of_pt(partial_transpose(DensityOp({"C", "D"}, cd), {"C"}));
        if (e.log_negativity < threshold) return {n, false, e.log_negativity, e.min_pt_eigenvalue};
        rho = channel.next_ab(rho);
    }
    return {cap, true, 0.0, 0.0};
}

struct SweepRow {
    double lambda;
    std::size_t n;
    double e_cd;
    double e_ab;
};

/// One XX+YY run per grid point; rows grouped by lambda in grid order, then by
/// round.
inline std::vector<SweepRow> sweep(const ProtocolConfig& config, const std::vector<double>& lambda_grid,
                                   std::size_t rounds) {
    std::vector<SweepRow> rows;
    rows.reserve(lambda_grid.size() * rounds);
    for (double lambda : lambda_grid) {
        if (!std::isfinite(lambda)) throw std::invalid_argument("sweep: lambda grid must be finite");
        ProtocolConfig c = config;
        c.unitary = XXYYSpec{lambda};
        for (const auto& r : run(c, rounds).records) rows.push_back({lambda, r.n, r.e_cd, r.e_ab});
    }
    return rows;
}

}  // namespace seqent
