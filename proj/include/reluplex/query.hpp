#pragma once

#include <string>
#include <vector>

#include "reluplex/linear.hpp"

namespace reluplex {

// Linear constraint over a dense index space (network inputs or outputs),
// written in raw units: sum(coeffs[i] * value[i]) relation constant.
struct QueryConstraint {
    std::vector<double> coeffs;
    Relation relation = Relation::LessEq;
    double constant = 0.0;
};

// Raw <-> normalized map. The network consumes normalized inputs and emits
// normalized outputs: x_norm = (x_raw - input_offset) / input_scale and
// y_raw = y_norm * output_scale + output_offset. Empty vectors mean identity.
struct Normalization {
    std::vector<double> input_offsets, input_scales;
    std::vector<double> output_offsets, output_scales;

    bool is_identity() const {
        return input_offsets.empty() && input_scales.empty() && output_offsets.empty() &&
               output_scales.empty();
    }

    // Raw input value mapped to network units; infinities pass through.
    double normalize_input(std::size_t i, double raw) const;
};

// A satisfiability query against a network, everything in raw units. The
// query holds iff some input in the box meets all input_constraints, all
// output_constraints, and at least one disjunct group (when present).
struct Query {
    std::string name;
    std::vector<double> input_lower, input_upper;
    std::vector<QueryConstraint> output_constraints;
    std::vector<QueryConstraint> input_constraints;
    std::vector<std::vector<QueryConstraint>> disjuncts;
    Normalization normalization;
    std::vector<std::string> input_units, output_units;

    // Shape checks against a concrete network; throws std::invalid_argument.
    void validate(unsigned num_inputs, unsigned num_outputs) const;
};

struct QueryParseError : std::runtime_error {
    explicit QueryParseError(const std::string& message) : std::runtime_error(message) {}
};

Query parse_query(const std::string& json_text);
Query load_query(const std::string& path);

std::string format_query(const Query& q);
void save_query(const Query& q, const std::string& path);

}  // namespace reluplex
