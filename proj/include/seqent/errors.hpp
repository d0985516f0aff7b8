#pragma once

#include <stdexcept>
#include <string>

namespace seqent {

/// A precondition of a public operation was violated (non-Hermitian input,
/// invalid state, non-unitary gate, ...).
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Matrix or register dimensions are inconsistent or out of range.
class SizeError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// A subsystem label was unknown, duplicated or otherwise unusable.
class LabelError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The request is well formed but outside what the operation supports.
class UnsupportedCase : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A derived quantity is undefined at the given parameters (e.g. a 1/(1-p)
/// term at p = 1).
class UndefinedQuantity : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The requested number of rounds exceeds the configured cap.
class CapExceeded : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

}  // namespace seqent
