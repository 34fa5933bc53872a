#pragma once

#include "jbtlab/errors.hpp"

namespace jbt {

/// Two-level tolerance policy used across the library.
///
/// eq_tol governs equality of scalars and elements; struct_tol governs
/// structural predicates (is-tripotent, orthogonality, span dimensions),
/// which chain several equality checks and accumulate error.
struct Tolerance {
    double eq_tol = 1e-9;
    double struct_tol = 1e-7;

    void validate() const {
        if (!(0.0 < eq_tol && eq_tol <= struct_tol && struct_tol < 1e-2)) {
            throw ContractError("Tolerance: need 0 < eq_tol <= struct_tol < 1e-2");
        }
    }
};

}  // namespace jbt
