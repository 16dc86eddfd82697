#pragma once

#include <cstddef>
#include <set>
#include <vector>

#include "reluplex/linear.hpp"

namespace reluplex {

// Basic-variable form: one row per basic variable, expressing it as a sparse
// linear combination of non-basic variables. A column index (variable ->
// rows mentioning it) is maintained so update() and pivot() touch only the
// rows they must.
class Tableau {
public:
    using Row = SparseVector;

    enum class PivotStatus { Ok, NotBasic, AlreadyBasic, ZeroPivot };

    bool is_basic(VarId var) const { return rows_.count(var) != 0; }
    std::size_t row_count() const { return rows_.size(); }

    const std::map<VarId, Row>& rows() const { return rows_; }
    const Row& row(VarId basic) const;
    double coefficient(VarId basic, VarId var) const;

    // Basics whose rows mention var; empty for unknown/basic vars.
    const std::set<VarId>& column(VarId var) const;

    // Row must be over non-basic variables and must not mention `basic`.
    void add_row(VarId basic, Row row);

    // Re-expresses `entering` from the row of `leaving`, then substitutes it
    // out of every other row. Coefficients below drop_tol are discarded.
    // Assignments are untouched: pivoting only changes the representation.
    PivotStatus pivot(VarId leaving, VarId entering, double drop_tol);

    double row_value(VarId basic, const std::vector<double>& assignment) const;

private:
    void index_row(VarId basic, const Row& row);
    void unindex_row(VarId basic, const Row& row);

    std::map<VarId, Row> rows_;
    std::map<VarId, std::set<VarId>> columns_;
};

}  // namespace reluplex
