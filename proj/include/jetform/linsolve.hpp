#pragma once

#include "jetform/coefficient.hpp"

#include <map>
#include <optional>
#include <vector>

namespace jetform {

/// A sparse linear system over the Gaussian rationals.
struct SparseSystem {
    struct Row {
        std::map<int, GaussRat> entries;  // column -> coefficient
        GaussRat rhs;
    };
    int num_cols = 0;
    std::vector<Row> rows;
};

/// Exact solve of A x = b. Rows are consumed in the given order; each row is
/// reduced against the pivots found so far and, if nonempty, contributes a
/// new pivot (its lowest remaining column). Free columns are set to zero, so
/// identical inputs always produce the identical solution. Returns nullopt
/// when the system is inconsistent.
std::optional<std::vector<GaussRat>> solve_sparse(const SparseSystem& system);

} // namespace jetform
