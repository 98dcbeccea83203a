#include "jetform/linsolve.hpp"

#include <algorithm>

namespace jetform {

std::optional<std::vector<GaussRat>> solve_sparse(const SparseSystem& system) {
    using Row = SparseSystem::Row;
    // pivot column -> reduced row. A pivot row never contains columns of
    // pivots created before it, so one ascending sweep reduces a new row.
    std::map<int, Row> pivots;
    std::vector<int> creation_order;

    for (const Row& input : system.rows) {
        Row row = input;
        for (int col : creation_order) {
            auto it = row.entries.find(col);
            if (it == row.entries.end()) continue;
            const Row& prow = pivots.at(col);
            GaussRat factor = it->second / prow.entries.at(col);
            row.entries.erase(it);
            for (auto& [c, v] : prow.entries) {
                if (c == col) continue;
                auto jt = row.entries.find(c);
                if (jt == row.entries.end()) {
                    GaussRat nv = -(factor * v);
                    if (!nv.is_zero()) row.entries.emplace(c, std::move(nv));
                } else {
                    jt->second -= factor * v;
                    if (jt->second.is_zero()) row.entries.erase(jt);
                }
            }
            row.rhs -= factor * prow.rhs;
        }
        if (row.entries.empty()) {
            if (!row.rhs.is_zero()) return std::nullopt;
            continue;
        }
        int col = row.entries.begin()->first;
        creation_order.push_back(col);
        pivots.emplace(col, std::move(row));
    }

    std::vector<GaussRat> x(static_cast<size_t>(system.num_cols), GaussRat(0));
    // Back-substitute in reverse creation order; a pivot row only references
    // free columns (zero) and pivots created after it (already resolved).
    for (auto it = creation_order.rbegin(); it != creation_order.rend(); ++it) {
        const Row& row = pivots.at(*it);
        GaussRat acc = row.rhs;
        GaussRat diag;
        for (auto& [col, coeff] : row.entries) {
            if (col == *it)
                diag = coeff;
            else
                acc -= coeff * x[static_cast<size_t>(col)];
        }
        x[static_cast<size_t>(*it)] = acc / diag;
    }
    return x;
}

} // namespace jetform
