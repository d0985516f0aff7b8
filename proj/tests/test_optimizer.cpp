#include <gtest/gtest.h>

#include <numbers>

#include "seqent/optimizer.hpp"

using namespace seqent;

namespace {

Theta xxyy_theta(double lambda) {
    Theta th{};
    th[pauli_param::kXX] = lambda;
    th[pauli_param::kYY] = lambda;
    return th;
}

std::size_t grid_scan_best(double x, std::size_t points) {
    std::size_t best = 0;
    for (std::size_t i = 1; i <= points; ++i) {
        const double lambda = (std::numbers::pi / 4) * static_cast<double>(i) / points;
        best = std::max(best, count_pairs(build_xxyy({lambda}), x, kDefaultRoundCap).n);
    }
    return best;
}

OptimizeRequest small_request(double x) {
    OptimizeRequest req;
    req.x = x;
    req.restarts = 3;
    req.max_evals = 800;
    req.seed = 7;
    return req;
}

}  // namespace

TEST(Objective, IdentityScoresZero) {
    const PairScore s = objective(Theta{}, 2.0, 100);
    EXPECT_EQ(s.n, 0u);
    EXPECT_EQ(s.margin, 0.0);
}

TEST(Objective, QuarterPiFullTransfer) {
    const PairScore s = objective(xxyy_theta(std::numbers::pi / 4), 0.0, 100);
    EXPECT_EQ(s.n, 1u);
    EXPECT_NEAR(s.margin, 0.0, 1e-12);
}

TEST(Objective, MatchesProtocolOnXXYYAxis) {
    const PairScore s = objective(xxyy_theta(0.05), 8.0, kDefaultRoundCap);
    const CountResult c = count_pairs(build_xxyy({0.05}), 8.0, kDefaultRoundCap);
    EXPECT_EQ(s.n, c.n);
    EXPECT_EQ(s.margin, c.failing_e_cd);
}

TEST(PairScore, Lexicographic) {
    EXPECT_LT((PairScore{1, 0.9, 0.0}), (PairScore{2, 0.0, 0.0}));
    EXPECT_LT((PairScore{2, 0.1, 0.0}), (PairScore{2, 0.2, 0.0}));
    EXPECT_LT((PairScore{2, 0.0, 0.1}), (PairScore{2, 0.0, 0.2}));
}

TEST(NelderMead, ConstantObjectiveReturnsStart) {
    const std::array<double, 3> start{0.3, -1.0, 2.0};
    const auto r = nelder_mead<3>([](const std::array<double, 3>&) { return 1.0; }, start);
    EXPECT_EQ(r.point, start);
    EXPECT_FALSE(r.budget_exhausted);
}

TEST(NelderMead, FindsQuadraticPeak) {
    const std::array<double, 3> peak{0.5, -0.25, 1.5};
    auto f = [&](const std::array<double, 3>& x) {
        double s = 0.0;
        for (std::size_t i = 0; i < 3; ++i) s -= (x[i] - peak[i]) * (x[i] - peak[i]);
        return s;
    };
    const auto r = nelder_mead<3>(f, {0.0, 0.0, 0.0});
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(r.point[i], peak[i], 1e-5);
}

TEST(NelderMead, BudgetExhaustionIsFlagged) {
    NelderMeadOptions opts;
    opts.max_evals = 10;
    const auto r = nelder_mead<3>([](const std::array<double, 3>& x) { return -x[0] * x[0] - x[1] * x[1]; },
                                  {1.0, 1.0, 1.0}, opts);
    EXPECT_TRUE(r.budget_exhausted);
    EXPECT_LE(r.evals, 10u);
}

TEST(NelderMead, XXYYAxisMatchesGridScan) {
    const double x = 3.0;
    auto f = [&](const std::array<double, 1>& l) { return to_score(count_pairs(build_xxyy({l[0]}), x, 500)); };
    NelderMeadOptions opts;
    opts.initial_step = 0.1;
    const auto r = nelder_mead<1>(f, {0.2}, opts);
    EXPECT_EQ(r.value.n, grid_scan_best(x, 10000));
}

TEST(MaximizePairs, ZeroThresholdFindsAPair) {
    OptimizeRequest req;
    req.x = 0.0;
    EXPECT_GE(maximize_pairs(req).best_n, 1u);
}

TEST(MaximizePairs, DeterministicAndReplayable) {
    const auto req = small_request(2.0);
    const auto a = maximize_pairs(req), b = maximize_pairs(req);
    EXPECT_EQ(a.best_theta, b.best_theta);
    EXPECT_EQ(a.best_n, b.best_n);
    EXPECT_EQ(a.tie_margin, b.tie_margin);
    EXPECT_EQ(a.eval_count, b.eval_count);
    ASSERT_EQ(a.restarts.size(), b.restarts.size());
    for (std::size_t i = 0; i < a.restarts.size(); ++i) {
        EXPECT_EQ(a.restarts[i].theta, b.restarts[i].theta);
        EXPECT_EQ(a.restarts[i].evals, b.restarts[i].evals);
    }
    const CountResult replay = count_pairs(build_pauli_param({a.best_theta}), req.x, req.final_cap);
    EXPECT_EQ(replay.n, a.best_n);
    EXPECT_EQ(replay.failing_e_cd, a.tie_margin);
}

TEST(MaximizePairs, DifferentSeedsDifferentStarts) {
    auto r1 = small_request(1.0);
    auto r2 = r1;
    r2.seed = 8;
    r1.restarts = r2.restarts = 1;
    EXPECT_NE(maximize_pairs(r1).restarts[0].start, maximize_pairs(r2).restarts[0].start);
}

TEST(MaximizePairs, WarmStartsKeepBestNMonotone) {
    std::vector<Theta> warm;
    std::size_t prev = 0;
    for (double x : {0.0, 1.0, 2.0, 3.0}) {
        auto req = small_request(x);
        req.warm_starts = warm;
        const auto r = maximize_pairs(req);
        EXPECT_GE(r.best_n, prev) << x;
        prev = r.best_n;
        warm = {r.best_theta};
    }
}

TEST(MaximizePairs, DominatesXXYYGridScan) {
    OptimizeRequest req;
    req.x = 1.0;
    req.restarts = 4;
    EXPECT_GE(maximize_pairs(req).best_n, grid_scan_best(1.0, 2000));
}

TEST(MaximizePairs, RejectsBadRequests) {
    OptimizeRequest req;
    req.x = -1.0;
    EXPECT_THROW(maximize_pairs(req), std::invalid_argument);
    req.x = 1.0;
    req.restarts = 0;
    EXPECT_THROW(maximize_pairs(req), std::invalid_argument);
}
