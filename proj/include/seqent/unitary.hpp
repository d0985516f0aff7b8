#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>

#include "seqent/errors.hpp"
#include "seqent/linalg.hpp"
#include "seqent/tolerances.hpp"

namespace seqent {

/// exp(-i lambda (X(x)X + Y(x)Y)). Only the product lambda = coupling * time
/// is modelled.
struct XXYYSpec {
    double lambda = 0.0;
};

inline constexpr std::size_t kPauliParamCount = 15;

/// Coefficients of the traceless two-qubit Pauli generators, indexed
/// row-major over (I, X, Y, Z) (x) (I, X, Y, Z) with I(x)I skipped:
///
///   0 IX   1 IY   2 IZ
///   3 XI   4 XX   5 XY   6 XZ
///   7 YI   8 YX   9 YY  10 YZ
///  11 ZI  12 ZX  13 ZY  14 ZZ
struct PauliParamSpec {
    std::array<double, kPauliParamCount> theta{};
};

using UnitarySpec = std::variant<XXYYSpec, PauliParamSpec>;

namespace pauli_param {

inline constexpr std::size_t kXX = 4;
inline constexpr std::size_t kYY = 9;

/// Left and right single-qubit Pauli indices (0=I..3=Z) of generator k.
inline std::pair<int, int> factors(std::size_t k) {
    if (k >= kPauliParamCount) throw std::out_of_range("pauli_param::factors: index must be < 15");
    const auto flat = static_cast<int>(k) + 1;
    return {flat / 4, flat % 4};
}

inline std::string name(std::size_t k) {
    static constexpr char kLetters[] = {'I', 'X', 'Y', 'Z'};
    const auto [l, r] = factors(k);
    return {kLetters[l], kLetters[r]};
}

inline ComplexMatrix generator(std::size_t k) {
    const auto [l, r] = factors(k);
    return kron(pauli::by_index(l), pauli::by_index(r));
}

}  // namespace pauli_param

/// X(x)X + Y(x)Y: zero on |00>, |11>; 2*sigma_x on span{|01>, |10>}.
inline ComplexMatrix xxyy_hamiltonian() {
    return kron(pauli::x(), pauli::x()) + kron(pauli::y(), pauli::y());
}

inline ComplexMatrix build_xxyy(const XXYYSpec& spec) {
    if (!std::isfinite(spec.lambda)) throw ContractError("build_xxyy: lambda must be finite");
    return expm_i_hermitian(xxyy_hamiltonian(), spec.lambda);
}

inline ComplexMatrix build_pauli_param(const PauliParamSpec& spec) {
    ComplexMatrix h(4);
    for (std::size_t k = 0; k < kPauliParamCount; ++k) {
        if (!std::isfinite(spec.theta[k])) throw ContractError("build_pauli_param: theta must be finite");
        if (spec.theta[k] != 0.0) h += pauli_param::generator(k) * Complex(spec.theta[k]);
    }
    return expm_i_hermitian(h, 1.0);
}

inline ComplexMatrix build_unitary(const UnitarySpec& spec) {
    return std::visit([](const auto& s) -> ComplexMatrix {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, XXYYSpec>)
            return build_xxyy(s);
        else
            return build_pauli_param(s);
    }, spec);
}

struct UnitaryCheck {
    bool ok;
    double residual;  // max |U^dagger U - I|
};

inline UnitaryCheck check_unitary(const ComplexMatrix& u, double tol = kTol.unitary) {
    const double r = unitary_residual(u);
    return {r < tol, r};
}

}  // namespace seqent
