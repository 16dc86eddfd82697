#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>

namespace reluplex {

using VarId = std::uint32_t;
inline constexpr VarId kNoVar = static_cast<VarId>(-1);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Sparse linear form over variables, keyed by VarId. Ordered so that all
// iteration (and therefore every heuristic that scans a row) is deterministic.
using SparseVector = std::map<VarId, double>;

// dst += factor * src, dropping entries whose magnitude falls below drop_tol.
void add_scaled(SparseVector& dst, const SparseVector& src, double factor,
                double drop_tol);

inline double coefficient_of(const SparseVector& v, VarId var) {
    auto it = v.find(var);
    return it == v.end() ? 0.0 : it->second;
}

enum class Relation { LessEq, GreaterEq, Equal };

// A linear constraint sum(coeffs) relation constant. Coefficients on the same
// variable merge by summation; a fully cancelled atom is rejected at use site.
struct LinearAtom {
    SparseVector coeffs;
    Relation relation = Relation::Equal;
    double constant = 0.0;

    LinearAtom() = default;
    LinearAtom(Relation rel, double c) : relation(rel), constant(c) {}

    LinearAtom& add_term(VarId var, double coeff) {
        auto [it, fresh] = coeffs.emplace(var, coeff);
        if (!fresh)
            it->second += coeff;
        if (it->second == 0.0)
            coeffs.erase(it);
        return *this;
    }

    bool empty() const { return coeffs.empty(); }
};

}  // namespace reluplex
