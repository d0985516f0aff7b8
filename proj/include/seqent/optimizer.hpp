#pragma once

// Derivative-free search for the gate U that keeps the most consecutive
// pairs above 2^-x ebits.

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

#include "seqent/protocol.hpp"
#include "seqent/unitary.hpp"

namespace seqent {

using Theta = std::array<double, kPauliParamCount>;

/// Lexicographic objective: more successful pairs first, then more
/// entanglement in the first failing pair. `witness` (minus the smallest
/// partial-transpose eigenvalue of that pair) only breaks ties, which matters
/// where the failing pair is separable and `margin` is flat at zero.
struct PairScore {
    std::size_t n = 0;
    double margin = 0.0;
    double witness = 0.0;

    friend auto operator<=>(const PairScore&, const PairScore&) = default;
};

inline PairScore to_score(const CountResult& c) { return {c.n, c.failing_e_cd, -c.failing_min_pt_eigenvalue}; }

inline PairScore objective(const Theta& theta, double x, std::size_t cap) {
    return to_score(count_pairs(build_pauli_param({theta}), x, cap));
}

struct NelderMeadOptions {
    double initial_step = 0.5;
    double min_diameter = 1e-6;
    std::size_t max_evals = 2000;
    double reflect = 1.0;
    double expand = 2.0;
    double contract = 0.5;
    double shrink = 0.5;
};

template <std::size_t N, class Value>
struct NelderMeadResult {
    std::array<double, N> point;
    Value value;
    std::size_t evals;
    bool budget_exhausted;
};

/// Nelder-Mead maximization of `f` over R^N. Only comparisons between values
/// are used, so any totally ordered `Value` works. The initial simplex is
/// `start` plus `initial_step` along each axis. Stops when the largest vertex
/// distance from the best vertex is below `min_diameter`, or when the budget
/// runs out (flagged). Ties keep the earlier vertex, so a constant objective
/// returns `start`.
template <std::size_t N, class F, class Value = std::invoke_result_t<F&, const std::array<double, N>&>>
NelderMeadResult<N, Value> nelder_mead(F&& f, const std::array<double, N>& start, const NelderMeadOptions& opts = {}) {
    using Point = std::array<double, N>;
    struct Vertex {
        Point x;
        Value v;
    };

    std::size_t evals = 0;
    auto eval = [&](const Point& x) {
        ++evals;
        return f(x);
    };
    auto budget_left = [&] { return evals < opts.max_evals; };

    std::vector<Vertex> simplex;
    simplex.reserve(N + 1);
    simplex.push_back({start, eval(start)});
    for (std::size_t i = 0; i < N && budget_left(); ++i) {
        Point x = start;
        x[i] += opts.initial_step;
        simplex.push_back({x, eval(x)});
    }
    // Best first; stable so earlier vertices win ties.
    auto order = [&] {
        std::stable_sort(simplex.begin(), simplex.end(), [](const Vertex& a, const Vertex& b) { return a.v > b.v; });
    };
    auto diameter = [&] {
        double d = 0.0;
        for (std::size_t k = 1; k < simplex.size(); ++k) {
            double s = 0.0;
            for (std::size_t i = 0; i < N; ++i) s += (simplex[k].x[i] - simplex[0].x[i]) * (simplex[k].x[i] - simplex[0].x[i]);
            d = std::max(d, std::sqrt(s));
        }
        return d;
    };
    auto along = [](const Point& from, const Point& to, double coeff) {
        Point out;
        for (std::size_t i = 0; i < N; ++i) out[i] = from[i] + coeff * (to[i] - from[i]);
        return out;
    };

    order();
    bool exhausted = simplex.size() < N + 1;
    while (!exhausted && diameter() >= opts.min_diameter) {
        if (!budget_left()) {
            exhausted = true;
            break;
        }
        Point centroid{};
        for (std::size_t k = 0; k < N; ++k)
            for (std::size_t i = 0; i < N; ++i) centroid[i] += simplex[k].x[i] / static_cast<double>(N);

        Vertex& worst = simplex[N];
        const Value& best_v = simplex[0].v;
        const Value& second_worst_v = simplex[N - 1].v;

        const Point xr = along(centroid, worst.x, -opts.reflect);
        const Value vr = eval(xr);

        if (vr > best_v) {
            if (budget_left()) {
                const Point xe = along(centroid, worst.x, -opts.reflect * opts.expand);
                const Value ve = eval(xe);
                worst = ve > vr ? Vertex{xe, ve} : Vertex{xr, vr};
            } else {
                worst = {xr, vr};
            }
        } else if (vr > second_worst_v) {
            worst = {xr, vr};
        } else {
            bool accepted = false;
            if (budget_left()) {
                if (vr > worst.v) {
                    const Point xc = along(centroid, xr, opts.contract);
                    const Value vc = eval(xc);
                    if (vc >= vr) {
                        worst = {xc, vc};
                        accepted = true;
                    }
                } else {
                    const Point xc = along(centroid, worst.x, opts.contract);
                    const Value vc = eval(xc);
                    if (vc > worst.v) {
                        worst = {xc, vc};
                        accepted = true;
                    }
                }
            }
            if (!accepted) {
                for (std::size_t k = 1; k <= N && budget_left(); ++k) {
                    simplex[k].x = along(simplex[0].x, simplex[k].x, opts.shrink);
                    simplex[k].v = eval(simplex[k].x);
                }
            }
        }
        order();
    }
    return {simplex[0].x, simplex[0].v, evals, exhausted};
}

struct OptimizeRequest {
    double x = 0.0;
    std::size_t restarts = 8;
    std::size_t max_evals = 3000;  // per restart
    std::uint64_t seed = 1;
    std::size_t round_cap = 500;               // used while searching
    std::size_t final_cap = kDefaultRoundCap;  // used to re-score candidates
    double box = std::numbers::pi;             // starts drawn from [-box, box]^15
    double initial_step = 0.5;
    /// Extra starting points tried before the random ones (e.g. the optimum
    /// found for a smaller x).
    std::vector<Theta> warm_starts;
};

struct RestartLog {
    std::size_t index;
    Theta start;
    Theta theta;
    PairScore search_score;  // at round_cap
    PairScore final_score;   // at final_cap
    std::size_t evals;
    bool budget_exhausted;
};

struct OptimizeResult {
    Theta best_theta{};
    std::size_t best_n = 0;
    double tie_margin = 0.0;  // E_CD at round best_n + 1
    bool saturated = false;
    std::size_t eval_count = 0;
    std::vector<RestartLog> restarts;
};

/// Multistart Nelder-Mead over the 15 generator coefficients. Warm starts run
/// first, then `restarts` seeded uniform starts. Each local optimum is
/// re-scored at `final_cap`; the best score wins, ties going to the earlier
/// restart.
inline OptimizeResult maximize_pairs(const OptimizeRequest& req) {
    if (!(req.x >= 0.0) || !std::isfinite(req.x)) throw std::invalid_argument("maximize_pairs: x must be >= 0");
    if (req.restarts == 0 && req.warm_starts.empty())
        throw std::invalid_argument("maximize_pairs: need at least one restart");

    std::vector<Theta> starts = req.warm_starts;
    std::mt19937_64 rng(req.seed);
    std::uniform_real_distribution<double> coord(-req.box, req.box);
    for (std::size_t r = 0; r < req.restarts; ++r) {
        Theta s;
        for (auto& v : s) v = coord(rng);
        starts.push_back(s);
    }

    auto search = [&](const Theta& th) { return objective(th, req.x, req.round_cap); };

    OptimizeResult result;
    bool have_best = false;
    PairScore best;
    for (std::size_t i = 0; i < starts.size(); ++i) {
        // Restart the simplex from each local optimum while it keeps improving
        // and the per-start budget allows.
        NelderMeadOptions opts;
        opts.initial_step = req.initial_step;
        std::size_t used = 0;
        bool exhausted = false;
        Theta point = starts[i];
        PairScore value{};
        for (bool first = true;; first = false) {
            opts.max_evals = req.max_evals - used;
            auto local = nelder_mead(search, point, opts);
            used += local.evals;
            exhausted = local.budget_exhausted;
            const bool improved = first || local.value > value;
            if (improved) {
                point = local.point;
                value = local.value;
            }
            if (!improved || exhausted || used >= req.max_evals) break;
        }

        const CountResult final_count = count_pairs(build_pauli_param({point}), req.x, req.final_cap);
        const PairScore final_score = to_score(final_count);
        result.eval_count += used + 1;
        result.restarts.push_back({i, starts[i], point, value, final_score, used, exhausted});
        if (!have_best || final_score > best) {
            have_best = true;
            best = final_score;
            result.best_theta = point;
            result.best_n = final_count.n;
            result.tie_margin = final_count.failing_e_cd;
            result.saturated = final_count.saturated;
        }
    }
    return result;
}

}  // namespace seqent
