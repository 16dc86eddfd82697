#include "reluplex/tableau.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace reluplex {

void add_scaled(SparseVector& dst, const SparseVector& src, double factor,
                double drop_tol) {
    if (factor == 0.0)
        return;
    for (const auto& [var, coeff] : src) {
        auto [it, fresh] = dst.emplace(var, 0.0);
        it->second += factor * coeff;
        if (std::abs(it->second) < drop_tol)
            dst.erase(it);
    }
}

const Tableau::Row& Tableau::row(VarId basic) const {
    auto it = rows_.find(basic);
    if (it == rows_.end())
        throw std::logic_error("tableau: no row for variable " +
                               std::to_string(basic));
    return it->second;
}

double Tableau::coefficient(VarId basic, VarId var) const {
    auto it = rows_.find(basic);
    if (it == rows_.end())
        return 0.0;
    return coefficient_of(it->second, var);
}

const std::set<VarId>& Tableau::column(VarId var) const {
    static const std::set<VarId> empty;
    auto it = columns_.find(var);
    return it == columns_.end() ? empty : it->second;
}

void Tableau::add_row(VarId basic, Row row) {
    assert(!is_basic(basic));
    assert(row.count(basic) == 0);
    index_row(basic, row);
    rows_.emplace(basic, std::move(row));
}

void Tableau::index_row(VarId basic, const Row& row) {
    for (const auto& [var, coeff] : row) {
        (void)coeff;
        columns_[var].insert(basic);
    }
}

void Tableau::unindex_row(VarId basic, const Row& row) {
    for (const auto& [var, coeff] : row) {
        (void)coeff;
        auto it = columns_.find(var);
        if (it == columns_.end())
            continue;
        it->second.erase(basic);
        if (it->second.empty())
            columns_.erase(it);
    }
}

Tableau::PivotStatus Tableau::pivot(VarId leaving, VarId entering,
                                    double drop_tol) {
    auto leave_it = rows_.find(leaving);
    if (leave_it == rows_.end())
        return PivotStatus::NotBasic;
    if (rows_.count(entering))
        return PivotStatus::AlreadyBasic;
    const double pivot_coeff = coefficient_of(leave_it->second, entering);
    if (pivot_coeff == 0.0)
        return PivotStatus::ZeroPivot;

    // entering = leaving/c - sum_{k != entering} (c_k/c) k
    Row entering_row;
    entering_row.emplace(leaving, 1.0 / pivot_coeff);
    for (const auto& [var, coeff] : leave_it->second) {
        if (var == entering)
            continue;
        const double c = -coeff / pivot_coeff;
        if (std::abs(c) >= drop_tol)
            entering_row.emplace(var, c);
    }

    unindex_row(leaving, leave_it->second);
    rows_.erase(leave_it);

    // Substitute into every other row that mentions the entering variable.
    auto col_it = columns_.find(entering);
    if (col_it != columns_.end()) {
        const std::set<VarId> mentions = col_it->second;
        for (VarId basic : mentions) {
            Row& r = rows_.at(basic);
            unindex_row(basic, r);
            const double scale = coefficient_of(r, entering);
            r.erase(entering);
            add_scaled(r, entering_row, scale, drop_tol);
            index_row(basic, r);
        }
    }

    index_row(entering, entering_row);
    rows_.emplace(entering, std::move(entering_row));
    return PivotStatus::Ok;
}

double Tableau::row_value(VarId basic,
                          const std::vector<double>& assignment) const {
    double sum = 0.0;
    for (const auto& [var, coeff] : row(basic))
        sum += coeff * assignment[var];
    return sum;
}

}  // namespace reluplex
