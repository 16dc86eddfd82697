#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "reluplex/encoder.hpp"
#include "reluplex/network.hpp"
#include "reluplex/query.hpp"

namespace reluplex {

// Raised when a query cannot be expressed in the requested format or the
// big-M constant fails validation. The message is user-facing.
class ExportError : public std::runtime_error {
  public:
    explicit ExportError(const std::string& msg) : std::runtime_error(msg) {}
};

// SMT-LIB v2 (QF_LRA) text for the network plus query, over the encoder's
// variable names and in normalized units. One ite assertion per ReLU pair:
//   (assert (= f (ite (>= b 0) b 0)))
// Disjunct groups become a single (or ...) assertion. Numeric literals are
// exact: integers, or dyadic rationals (/ n d).
std::string export_smtlib(const Network& net, const Query& q);

struct LpExportOptions {
    // 0 derives M from interval propagation over the query's input box.
    // A user value must exceed every reachable pre-activation magnitude;
    // with an unbounded box a user value is accepted but flagged.
    double big_m = 0.0;
    // Which disjunct group to include. Mandatory when the query has more
    // than one group: LP text has no disjunction.
    std::size_t disjunct = kNoDisjunct;
};

struct LpExport {
    std::string text;
    double big_m = 0.0;             // constant emitted; 0 when no ReLUs
    bool big_m_unvalidated = false; // user M accepted over an unbounded box
};

// CPLEX-style LP text (Minimize / Subject To / Bounds / Binaries / End) with
// per-ReLU booleans b_on_*, b_off_* and the six mixed-integer rows
//   b_on + b_off = 1,  f >= 0,  b - f - M*b_off <= 0,  b - f + M*b_off >= 0,
//   f - M*b_on <= 0,   b - M*b_on <= 0.
// Throws ExportError when M cannot be derived or validated, and when the
// query has multiple disjunct groups and options name none.
LpExport export_lp(const Network& net, const Query& q,
                   const LpExportOptions& options = {});

}  // namespace reluplex
