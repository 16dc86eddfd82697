#include "reluplex/exporter.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace reluplex {

namespace {

std::string int128_str(unsigned __int128 v) {
    if (v == 0) return "0";
    char buf[40];
    int i = sizeof(buf);
    while (v != 0) {
        buf[--i] = static_cast<char>('0' + static_cast<unsigned>(v % 10));
        v /= 10;
    }
    return std::string(buf + i, buf + sizeof(buf));
}

// Exact SMT-LIB literal for a double: an integer, or a dyadic rational
// (/ n 2^k), negatives wrapped in (- ...). Doubles are scaled integers, so
// frexp recovers the numerator exactly.
std::string smt_number(double v) {
    if (v == 0.0) return "0";
    const bool neg = v < 0.0;
    const double a = std::fabs(v);
    std::string body;
    if (a == std::rint(a) && a <= 9.007199254740992e15) {
        body = int128_str(static_cast<unsigned __int128>(a));
    } else {
        int exp = 0;
        const double m = std::frexp(a, &exp);
        unsigned __int128 n =
            static_cast<unsigned __int128>(std::ldexp(m, 53));
        exp -= 53;
        while ((n & 1) == 0) {
            n >>= 1;
            ++exp;
        }
        if (exp >= 0) {
            if (exp > 70) throw ExportError("numeric literal out of range");
            body = int128_str(n << exp);
        } else {
            if (exp < -126) throw ExportError("numeric literal out of range");
            body = "(/ " + int128_str(n) + " " +
                   int128_str(static_cast<unsigned __int128>(1) << -exp) + ")";
        }
    }
    return neg ? "(- " + body + ")" : body;
}

std::string smt_term(double coeff, const std::string& name) {
    if (coeff == 1.0) return name;
    if (coeff == -1.0) return "(- " + name + ")";
    return "(* " + smt_number(coeff) + " " + name + ")";
}

std::string smt_sum(const LinearAtom& atom, const VarMap& vars) {
    std::string out;
    std::size_t terms = 0;
    for (const auto& [v, c] : atom.coeffs) {
        if (c == 0.0) continue;
        if (terms) out += " ";
        out += smt_term(c, vars.name(v));
        ++terms;
    }
    if (terms == 0) return "0";
    if (terms == 1) return out;
    return "(+ " + out + ")";
}

const char* smt_relation(Relation r) {
    switch (r) {
        case Relation::LessEq: return "<=";
        case Relation::GreaterEq: return ">=";
        default: return "=";
    }
}

std::string smt_atom(const LinearAtom& atom, const VarMap& vars) {
    return "(" + std::string(smt_relation(atom.relation)) + " " +
           smt_sum(atom, vars) + " " + smt_number(atom.constant) + ")";
}

std::string lp_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// "c1 n1 + c2 n2 - c3 n3"; coefficients always explicit, sign folded into
// the connective so the text parses as a plain term list.
std::string lp_terms(const LinearAtom& atom, const VarMap& vars) {
    std::string out;
    for (const auto& [v, c] : atom.coeffs) {
        if (c == 0.0) continue;
        if (out.empty())
            out += c < 0.0 ? "- " : "";
        else
            out += c < 0.0 ? " - " : " + ";
        out += lp_number(std::fabs(c)) + " " + vars.name(v);
    }
    return out.empty() ? "0 " + vars.name(0) : out;
}

const char* lp_relation(Relation r) {
    switch (r) {
        case Relation::LessEq: return "<=";
        case Relation::GreaterEq: return ">=";
        default: return "=";
    }
}

// Largest hidden pre-activation magnitude reachable over the normalized
// input box; NaN when some side is unbounded.
double max_hidden_magnitude(const Network& net, const Query& q) {
    std::vector<double> lo(net.num_inputs()), hi(net.num_inputs());
    for (unsigned i = 0; i < net.num_inputs(); ++i) {
        lo[i] = q.normalization.normalize_input(i, q.input_lower[i]);
        hi[i] = q.normalization.normalize_input(i, q.input_upper[i]);
    }
    const Network::IntervalTrace t = net.propagate(lo, hi);
    double worst = 0.0;
    // pre[t] bounds layer t+1; the last transition is the linear output.
    for (unsigned tr = 0; tr + 2 < net.num_layers(); ++tr) {
        for (double v : t.pre_lo[tr]) {
            if (std::isinf(v)) return std::nan("");
            worst = std::max(worst, std::fabs(v));
        }
        for (double v : t.pre_hi[tr]) {
            if (std::isinf(v)) return std::nan("");
            worst = std::max(worst, std::fabs(v));
        }
    }
    return worst;
}

}  // namespace

std::string export_smtlib(const Network& net, const Query& q) {
    const EncodedQuery enc = encode(net, q);
    const VarMap& vars = enc.vars;
    std::ostringstream out;

    if (!q.name.empty()) out << "; " << q.name << "\n";
    out << "(set-logic QF_LRA)\n";
    for (VarId v = 0; v < vars.num_problem_vars; ++v)
        out << "(declare-fun " << vars.name(v) << " () Real)\n";

    for (const auto& [v, lo] : enc.lower_bounds)
        out << "(assert (<= " << smt_number(lo) << " " << vars.name(v)
            << "))\n";
    for (const auto& [v, hi] : enc.upper_bounds)
        out << "(assert (<= " << vars.name(v) << " " << smt_number(hi)
            << "))\n";

    for (const LinearAtom& atom : enc.atoms)
        out << "(assert " << smt_atom(atom, vars) << ")\n";

    for (const ReluPair& p : enc.pairs) {
        const std::string b = vars.name(p.backward), f = vars.name(p.forward);
        out << "(assert (= " << f << " (ite (>= " << b << " 0) " << b
            << " 0)))\n";
    }

    if (!enc.disjunct_atoms.empty()) {
        out << "(assert (or";
        for (const auto& group : enc.disjunct_atoms) {
            if (group.size() == 1) {
                out << " " << smt_atom(group[0], vars);
                continue;
            }
            out << " (and";
            for (const LinearAtom& atom : group)
                out << " " << smt_atom(atom, vars);
            out << ")";
        }
        out << "))\n";
    }

    out << "(check-sat)\n(get-model)\n";
    return out.str();
}

LpExport export_lp(const Network& net, const Query& q,
                   const LpExportOptions& options) {
    const EncodedQuery enc = encode(net, q);
    const VarMap& vars = enc.vars;
    LpExport res;

    std::size_t disjunct = options.disjunct;
    if (disjunct == kNoDisjunct && enc.disjunct_atoms.size() == 1)
        disjunct = 0;
    if (disjunct == kNoDisjunct && enc.disjunct_atoms.size() > 1)
        throw ExportError(
            "query has " + std::to_string(enc.disjunct_atoms.size()) +
            " disjunct groups and LP text cannot express disjunction; "
            "export one group at a time with --disjunct");
    if (disjunct != kNoDisjunct && disjunct >= enc.disjunct_atoms.size())
        throw ExportError("disjunct index out of range");

    if (!enc.pairs.empty()) {
        const double reach = max_hidden_magnitude(net, q);
        if (std::isnan(reach)) {
            if (options.big_m <= 0.0)
                throw ExportError(
                    "input box leaves pre-activation bounds unbounded, so no "
                    "safe big-M can be derived; pass one explicitly (1e6 is "
                    "the conventional choice)");
            res.big_m = options.big_m;
            res.big_m_unvalidated = true;
        } else if (options.big_m > 0.0) {
            if (options.big_m <= reach)
                throw ExportError(
                    "big-M " + lp_number(options.big_m) +
                    " does not exceed the reachable pre-activation magnitude " +
                    lp_number(reach));
            res.big_m = options.big_m;
        } else {
            double m = 10.0;
            while (m <= reach) m *= 10.0;
            res.big_m = m;
        }
    }
    const std::string M = lp_number(res.big_m);

    std::ostringstream out;
    if (!q.name.empty()) out << "\\ " << q.name << "\n";
    out << "Minimize\n obj: 0 " << vars.name(0) << "\nSubject To\n";

    unsigned row = 0;
    const auto emit_atom = [&](const LinearAtom& atom) {
        out << " c" << ++row << ": " << lp_terms(atom, vars) << " "
            << lp_relation(atom.relation) << " " << lp_number(atom.constant)
            << "\n";
    };
    for (const LinearAtom& atom : enc.atoms) emit_atom(atom);
    if (disjunct != kNoDisjunct)
        for (const LinearAtom& atom : enc.disjunct_atoms[disjunct])
            emit_atom(atom);

    std::size_t pair_index = 0;
    std::vector<std::string> on_names, off_names;
    for (std::size_t layer = 0; layer < vars.backward.size(); ++layer) {
        for (std::size_t i = 0; i < vars.backward[layer].size(); ++i) {
            const ReluPair& p = enc.pairs[pair_index++];
            const std::string b = vars.name(p.backward);
            const std::string f = vars.name(p.forward);
            const std::string suffix = std::to_string(layer + 2) + "_" +
                                       std::to_string(i + 1);
            const std::string on = "b_on_" + suffix;
            const std::string off = "b_off_" + suffix;
            on_names.push_back(on);
            off_names.push_back(off);
            out << " c" << ++row << ": " << on << " + " << off << " = 1\n";
            out << " c" << ++row << ": " << f << " >= 0\n";
            out << " c" << ++row << ": " << b << " - " << f << " - " << M
                << " " << off << " <= 0\n";
            out << " c" << ++row << ": " << b << " - " << f << " + " << M
                << " " << off << " >= 0\n";
            out << " c" << ++row << ": " << f << " - " << M << " " << on
                << " <= 0\n";
            out << " c" << ++row << ": " << b << " - " << M << " " << on
                << " <= 0\n";
        }
    }

    out << "Bounds\n";
    for (std::size_t i = 0; i < vars.inputs.size(); ++i) {
        const std::string name = vars.name(vars.inputs[i]);
        const double lo = q.normalization.normalize_input(i, q.input_lower[i]);
        const double hi = q.normalization.normalize_input(i, q.input_upper[i]);
        const bool flo = std::isfinite(lo), fhi = std::isfinite(hi);
        if (flo && fhi)
            out << " " << lp_number(lo) << " <= " << name
                << " <= " << lp_number(hi) << "\n";
        else if (flo)
            out << " " << name << " >= " << lp_number(lo) << "\n";
        else if (fhi)
            out << " -infinity <= " << name << " <= " << lp_number(hi) << "\n";
        else
            out << " " << name << " free\n";
    }
    for (const auto& layer : vars.backward)
        for (VarId v : layer) out << " " << vars.name(v) << " free\n";
    for (VarId v : vars.outputs) out << " " << vars.name(v) << " free\n";

    if (!on_names.empty()) {
        out << "Binaries\n";
        for (std::size_t i = 0; i < on_names.size(); ++i)
            out << " " << on_names[i] << " " << off_names[i] << "\n";
    }
    out << "End\n";

    res.text = out.str();
    return res;
}

}  // namespace reluplex
