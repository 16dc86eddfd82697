#include "reluplex/query.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace reluplex {

double Normalization::normalize_input(std::size_t i, double raw) const {
    if (!std::isfinite(raw)) return raw;
    const double off = input_offsets.empty() ? 0.0 : input_offsets[i];
    const double scale = input_scales.empty() ? 1.0 : input_scales[i];
    return (raw - off) / scale;
}

namespace {

using nlohmann::json;

double bound_from_json(const json& v, double sign_if_null, const char* where) {
    if (v.is_null()) return sign_if_null;
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "inf" || s == "+inf") return kInfinity;
        if (s == "-inf") return -kInfinity;
    }
    throw QueryParseError(std::string(where) + ": bound must be a number, null, or \"inf\"/\"-inf\"");
}

Relation relation_from_string(const std::string& s, const char* where) {
    if (s == "<=") return Relation::LessEq;
    if (s == ">=") return Relation::GreaterEq;
    if (s == "=" || s == "==") return Relation::Equal;
    throw QueryParseError(std::string(where) + ": relation must be \"<=\", \">=\", or \"=\"");
}

const char* relation_to_string(Relation r) {
    switch (r) {
        case Relation::LessEq: return "<=";
        case Relation::GreaterEq: return ">=";
        case Relation::Equal: return "=";
    }
    return "?";
}

QueryConstraint constraint_from_json(const json& j, const char* where) {
    if (!j.is_object() || !j.contains("coeffs") || !j.contains("relation") ||
        !j.contains("constant"))
        throw QueryParseError(std::string(where) +
                              ": constraint needs \"coeffs\", \"relation\", \"constant\"");
    QueryConstraint c;
    if (!j["coeffs"].is_array())
        throw QueryParseError(std::string(where) + ": \"coeffs\" must be an array of numbers");
    for (const auto& v : j["coeffs"]) {
        if (!v.is_number())
            throw QueryParseError(std::string(where) + ": \"coeffs\" must be an array of numbers");
        c.coeffs.push_back(v.get<double>());
    }
    if (!j["relation"].is_string())
        throw QueryParseError(std::string(where) + ": \"relation\" must be a string");
    c.relation = relation_from_string(j["relation"].get<std::string>(), where);
    if (!j["constant"].is_number())
        throw QueryParseError(std::string(where) + ": \"constant\" must be a number");
    c.constant = j["constant"].get<double>();
    return c;
}

json constraint_to_json(const QueryConstraint& c) {
    json j;
    j["coeffs"] = c.coeffs;
    j["relation"] = relation_to_string(c.relation);
    j["constant"] = c.constant;
    return j;
}

std::vector<double> doubles_from_json(const json& arr, const char* where) {
    if (!arr.is_array())
        throw QueryParseError(std::string(where) + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& v : arr) {
        if (!v.is_number())
            throw QueryParseError(std::string(where) + ": expected an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

json bound_to_json(double v) {
    if (std::isinf(v)) return nullptr;
    return v;
}

}  // namespace

Query parse_query(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw QueryParseError(std::string("query is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw QueryParseError("query must be a JSON object");
    if (j.contains("schema_version") &&
        (!j["schema_version"].is_number_integer() || j["schema_version"].get<int>() != 1))
        throw QueryParseError("unsupported query schema_version (expected 1)");

    Query q;
    if (j.contains("name")) {
        if (!j["name"].is_string()) throw QueryParseError("\"name\" must be a string");
        q.name = j["name"].get<std::string>();
    }

    if (!j.contains("input_box") || !j["input_box"].is_object())
        throw QueryParseError("query needs an \"input_box\" object");
    const json& box = j["input_box"];
    if (!box.contains("lower") || !box.contains("upper") || !box["lower"].is_array() ||
        !box["upper"].is_array())
        throw QueryParseError("\"input_box\" needs \"lower\" and \"upper\" arrays");
    for (const auto& v : box["lower"]) q.input_lower.push_back(bound_from_json(v, -kInfinity, "input_box.lower"));
    for (const auto& v : box["upper"]) q.input_upper.push_back(bound_from_json(v, kInfinity, "input_box.upper"));
    if (q.input_lower.size() != q.input_upper.size())
        throw QueryParseError("\"input_box\" lower/upper lengths differ");
    if (q.input_lower.empty()) throw QueryParseError("\"input_box\" must not be empty");

    if (j.contains("output_constraints")) {
        if (!j["output_constraints"].is_array())
            throw QueryParseError("\"output_constraints\" must be an array");
        for (const auto& c : j["output_constraints"])
            q.output_constraints.push_back(constraint_from_json(c, "output_constraints"));
    }
    if (j.contains("input_constraints")) {
        if (!j["input_constraints"].is_array())
            throw QueryParseError("\"input_constraints\" must be an array");
        for (const auto& c : j["input_constraints"])
            q.input_constraints.push_back(constraint_from_json(c, "input_constraints"));
    }
    if (j.contains("disjuncts")) {
        if (!j["disjuncts"].is_array())
            throw QueryParseError("\"disjuncts\" must be an array of constraint groups");
        for (const auto& group : j["disjuncts"]) {
            if (!group.is_array())
                throw QueryParseError("each disjunct must be an array of constraints");
            std::vector<QueryConstraint> g;
            for (const auto& c : group) g.push_back(constraint_from_json(c, "disjuncts"));
            if (g.empty()) throw QueryParseError("a disjunct group must not be empty");
            q.disjuncts.push_back(std::move(g));
        }
        if (q.disjuncts.empty()) throw QueryParseError("\"disjuncts\" must not be an empty array");
    }

    if (j.contains("normalization")) {
        const json& n = j["normalization"];
        if (!n.is_object()) throw QueryParseError("\"normalization\" must be an object");
        if (n.contains("input_offsets"))
            q.normalization.input_offsets = doubles_from_json(n["input_offsets"], "normalization.input_offsets");
        if (n.contains("input_scales"))
            q.normalization.input_scales = doubles_from_json(n["input_scales"], "normalization.input_scales");
        if (n.contains("output_offsets"))
            q.normalization.output_offsets = doubles_from_json(n["output_offsets"], "normalization.output_offsets");
        if (n.contains("output_scales"))
            q.normalization.output_scales = doubles_from_json(n["output_scales"], "normalization.output_scales");
        for (double s : q.normalization.input_scales)
            if (s <= 0) throw QueryParseError("normalization input_scales must be positive");
        for (double s : q.normalization.output_scales)
            if (s <= 0) throw QueryParseError("normalization output_scales must be positive");
    }

    if (j.contains("units")) {
        const json& u = j["units"];
        if (!u.is_object()) throw QueryParseError("\"units\" must be an object");
        if (u.contains("inputs"))
            for (const auto& s : u["inputs"]) q.input_units.push_back(s.get<std::string>());
        if (u.contains("outputs"))
            for (const auto& s : u["outputs"]) q.output_units.push_back(s.get<std::string>());
    }
    return q;
}

void Query::validate(unsigned num_inputs, unsigned num_outputs) const {
    if (input_lower.size() != num_inputs)
        throw std::invalid_argument("query input box has " + std::to_string(input_lower.size()) +
                                    " entries, network has " + std::to_string(num_inputs) +
                                    " inputs");
    for (std::size_t i = 0; i < input_lower.size(); ++i)
        if (input_lower[i] > input_upper[i])
            throw std::invalid_argument("query input box has lower > upper at index " +
                                        std::to_string(i));
    auto check_group = [&](const std::vector<QueryConstraint>& cs, std::size_t want,
                           const char* what) {
        for (const QueryConstraint& c : cs) {
            if (c.coeffs.size() != want)
                throw std::invalid_argument(std::string(what) + " constraint has " +
                                            std::to_string(c.coeffs.size()) +
                                            " coefficients, expected " + std::to_string(want));
            bool nonzero = false;
            for (double v : c.coeffs) nonzero = nonzero || v != 0.0;
            if (!nonzero)
                throw std::invalid_argument(std::string(what) +
                                            " constraint has all-zero coefficients");
        }
    };
    check_group(output_constraints, num_outputs, "output");
    check_group(input_constraints, num_inputs, "input");
    for (const auto& g : disjuncts) check_group(g, num_outputs, "disjunct");

    auto check_len = [](const std::vector<double>& v, std::size_t want, const char* what) {
        if (!v.empty() && v.size() != want)
            throw std::invalid_argument(std::string("normalization ") + what + " has " +
                                        std::to_string(v.size()) + " entries, expected " +
                                        std::to_string(want));
    };
    check_len(normalization.input_offsets, num_inputs, "input_offsets");
    check_len(normalization.input_scales, num_inputs, "input_scales");
    check_len(normalization.output_offsets, num_outputs, "output_offsets");
    check_len(normalization.output_scales, num_outputs, "output_scales");
}

std::string format_query(const Query& q) {
    json j;
    j["schema_version"] = 1;
    if (!q.name.empty()) j["name"] = q.name;
    json lower = json::array(), upper = json::array();
    for (double v : q.input_lower) lower.push_back(bound_to_json(v));
    for (double v : q.input_upper) upper.push_back(bound_to_json(v));
    j["input_box"] = {{"lower", lower}, {"upper", upper}};
    if (!q.output_constraints.empty()) {
        json arr = json::array();
        for (const auto& c : q.output_constraints) arr.push_back(constraint_to_json(c));
        j["output_constraints"] = arr;
    }
    if (!q.input_constraints.empty()) {
        json arr = json::array();
        for (const auto& c : q.input_constraints) arr.push_back(constraint_to_json(c));
        j["input_constraints"] = arr;
    }
    if (!q.disjuncts.empty()) {
        json arr = json::array();
        for (const auto& g : q.disjuncts) {
            json group = json::array();
            for (const auto& c : g) group.push_back(constraint_to_json(c));
            arr.push_back(group);
        }
        j["disjuncts"] = arr;
    }
    if (!q.normalization.is_identity()) {
        json n;
        if (!q.normalization.input_offsets.empty()) n["input_offsets"] = q.normalization.input_offsets;
        if (!q.normalization.input_scales.empty()) n["input_scales"] = q.normalization.input_scales;
        if (!q.normalization.output_offsets.empty()) n["output_offsets"] = q.normalization.output_offsets;
        if (!q.normalization.output_scales.empty()) n["output_scales"] = q.normalization.output_scales;
        j["normalization"] = n;
    }
    if (!q.input_units.empty() || !q.output_units.empty()) {
        json u;
        if (!q.input_units.empty()) u["inputs"] = q.input_units;
        if (!q.output_units.empty()) u["outputs"] = q.output_units;
        j["units"] = u;
    }
    return j.dump(2) + "\n";
}

Query load_query(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open query file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_query(buf.str());
    } catch (const QueryParseError& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

void save_query(const Query& q, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write query file '" + path + "'");
    out << format_query(q);
}

}  // namespace reluplex
