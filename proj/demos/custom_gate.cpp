// Pair counts for a hand-built gate versus the best XX+YY strength.

#include <cstdio>
#include <numbers>

#include "seqent/seqent.hpp"

int main() {
    using namespace seqent;
    const double x = 6.0;

    PauliParamSpec spec;
    spec.theta[pauli_param::kXX] = 0.25;
    spec.theta[pauli_param::kYY] = 0.25;
    spec.theta[14] = 0.4;  // ZZ
    const CountResult custom = count_pairs(build_pauli_param(spec), x, kDefaultRoundCap);

    std::size_t best = 0;
    double best_lambda = 0.0;
    for (int i = 1; i <= 1000; ++i) {
        const double lambda = std::numbers::pi / 4 * i / 1000;
        const std::size_t n = count_pairs(build_xxyy({lambda}), x, kDefaultRoundCap).n;
        if (n > best) {
            best = n;
            best_lambda = lambda;
        }
    }

    std::printf("threshold 2^-%g ebits\n", x);
    std::printf("XX+YY+ZZ gate: %zu pairs (next pair gets %.3g)\n", custom.n, custom.failing_e_cd);
    std::printf("best XX+YY:    %zu pairs at lambda = %.4f\n", best, best_lambda);
}
