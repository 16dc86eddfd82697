#include "reluplex/encoder.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace reluplex {

namespace {

// Raw-unit constraint rewritten over normalized variables. value_raw =
// value_norm * scale + offset, so coefficients pick up the scale (positive,
// relations keep their direction) and the offsets move into the constant.
LinearAtom lower_constraint(const QueryConstraint& c, const std::vector<VarId>& vars,
                            const std::vector<double>& offsets,
                            const std::vector<double>& scales) {
    LinearAtom atom(c.relation, c.constant);
    double shift = 0.0;
    for (std::size_t i = 0; i < c.coeffs.size(); ++i) {
        if (c.coeffs[i] == 0.0) continue;
        const double scale = scales.empty() ? 1.0 : scales[i];
        const double off = offsets.empty() ? 0.0 : offsets[i];
        atom.add_term(vars[i], c.coeffs[i] * scale);
        shift += c.coeffs[i] * off;
    }
    atom.constant -= shift;
    return atom;
}

}  // namespace

EncodedQuery encode(const Network& net, const Query& q) {
    net.validate();
    q.validate(net.num_inputs(), net.num_outputs());

    EncodedQuery enc;
    VarMap& vm = enc.vars;
    VarId next = 0;

    for (unsigned i = 0; i < net.num_inputs(); ++i) {
        vm.inputs.push_back(next++);
        vm.names.push_back("x" + std::to_string(i + 1));
    }
    const unsigned L = net.num_layers();
    for (unsigned layer = 1; layer + 1 < L; ++layer) {
        std::vector<VarId> b, f;
        for (unsigned i = 0; i < net.layer_sizes[layer]; ++i) {
            b.push_back(next++);
            vm.names.push_back("v" + std::to_string(layer + 1) + "_" + std::to_string(i + 1) +
                               "_b");
        }
        for (unsigned i = 0; i < net.layer_sizes[layer]; ++i) {
            f.push_back(next++);
            vm.names.push_back("v" + std::to_string(layer + 1) + "_" + std::to_string(i + 1) +
                               "_f");
        }
        vm.backward.push_back(std::move(b));
        vm.forward.push_back(std::move(f));
    }
    for (unsigned j = 0; j < net.num_outputs(); ++j) {
        vm.outputs.push_back(next++);
        vm.names.push_back("y" + std::to_string(j + 1));
    }
    vm.num_problem_vars = next;

    // Node rows, layer by layer.
    for (unsigned t = 0; t + 1 < L; ++t) {
        const bool is_output = (t + 2 == L);
        const std::vector<VarId>& prev =
            t == 0 ? vm.inputs : vm.forward[t - 1];
        for (unsigned i = 0; i < net.layer_sizes[t + 1]; ++i) {
            const VarId node = is_output ? vm.outputs[i] : vm.backward[t][i];
            LinearAtom atom(Relation::Equal, net.biases[t][i]);
            atom.add_term(node, 1.0);
            for (std::size_t j = 0; j < prev.size(); ++j) {
                const double w = net.weights[t][i][j];
                if (w != 0.0) atom.add_term(prev[j], -w);
            }
            enc.atoms.push_back(std::move(atom));
        }
        if (!is_output)
            for (unsigned i = 0; i < net.layer_sizes[t + 1]; ++i) {
                ReluPair p;
                p.backward = vm.backward[t][i];
                p.forward = vm.forward[t][i];
                enc.pairs.push_back(p);
            }
    }

    for (const QueryConstraint& c : q.input_constraints)
        enc.atoms.push_back(lower_constraint(c, vm.inputs, q.normalization.input_offsets,
                                             q.normalization.input_scales));
    for (const QueryConstraint& c : q.output_constraints)
        enc.atoms.push_back(lower_constraint(c, vm.outputs, q.normalization.output_offsets,
                                             q.normalization.output_scales));
    for (const auto& group : q.disjuncts) {
        std::vector<LinearAtom> atoms;
        for (const QueryConstraint& c : group)
            atoms.push_back(lower_constraint(c, vm.outputs, q.normalization.output_offsets,
                                             q.normalization.output_scales));
        enc.disjunct_atoms.push_back(std::move(atoms));
    }

    for (std::size_t i = 0; i < vm.inputs.size(); ++i) {
        const double lo = q.normalization.normalize_input(i, q.input_lower[i]);
        const double hi = q.normalization.normalize_input(i, q.input_upper[i]);
        if (std::isfinite(lo)) enc.lower_bounds.emplace_back(vm.inputs[i], lo);
        if (std::isfinite(hi)) enc.upper_bounds.emplace_back(vm.inputs[i], hi);
    }
    for (const auto& layer : vm.forward)
        for (VarId f : layer) enc.lower_bounds.emplace_back(f, 0.0);
    return enc;
}

SimplexState build_state(const EncodedQuery& enc, std::size_t disjunct) {
    std::vector<LinearAtom> atoms = enc.atoms;
    if (disjunct != kNoDisjunct) {
        if (disjunct >= enc.disjunct_atoms.size())
            throw std::out_of_range("disjunct index out of range");
        for (const LinearAtom& a : enc.disjunct_atoms[disjunct]) atoms.push_back(a);
    }
    SimplexState state = SimplexState::init_configuration(enc.vars.num_problem_vars, atoms);
    for (const auto& [v, lo] : enc.lower_bounds)
        if (state.set_lower(v, lo))
            throw std::invalid_argument("encoded bounds cross on " + enc.vars.name(v));
    for (const auto& [v, hi] : enc.upper_bounds)
        if (state.set_upper(v, hi))
            throw std::invalid_argument("encoded bounds cross on " + enc.vars.name(v));
    return state;
}

DecodedWitness decode_witness(const EncodedQuery& enc, const Network& net, const Query& q,
                              const std::vector<double>& assignment, double tolerance) {
    DecodedWitness w;
    for (VarId v : enc.vars.inputs) w.inputs_normalized.push_back(assignment.at(v));
    for (VarId v : enc.vars.outputs) w.outputs_normalized.push_back(assignment.at(v));

    const Normalization& n = q.normalization;
    for (std::size_t i = 0; i < w.inputs_normalized.size(); ++i) {
        const double off = n.input_offsets.empty() ? 0.0 : n.input_offsets[i];
        const double scale = n.input_scales.empty() ? 1.0 : n.input_scales[i];
        w.inputs.push_back(w.inputs_normalized[i] * scale + off);
    }
    for (std::size_t j = 0; j < w.outputs_normalized.size(); ++j) {
        const double off = n.output_offsets.empty() ? 0.0 : n.output_offsets[j];
        const double scale = n.output_scales.empty() ? 1.0 : n.output_scales[j];
        w.outputs.push_back(w.outputs_normalized[j] * scale + off);
    }

    const std::vector<double> replay = net.forward(w.inputs_normalized);
    double err = 0.0;
    for (std::size_t j = 0; j < replay.size(); ++j)
        err = std::max(err, std::abs(replay[j] - w.outputs_normalized[j]));
    w.max_replay_error = err;
    w.replay_ok = err <= tolerance;
    return w;
}

namespace {

struct GroupOutcome {
    SolveResult result;
    bool ran = false;
};

}  // namespace

QueryResult solve_query(const Network& net, const Query& q, const SolveQueryOptions& options) {
    const EncodedQuery enc = encode(net, q);
    const std::size_t groups = enc.disjunct_atoms.empty() ? 1 : enc.disjunct_atoms.size();
    const bool plain = enc.disjunct_atoms.empty();

    QueryResult out;
    out.under_approximate = options.engine.under_approx_epsilon > 0.0;

    std::vector<GroupOutcome> outcomes(groups);
    const auto run_group = [&](std::size_t g, const std::atomic<bool>* cancel) {
        EngineOptions eo = options.engine;
        eo.cancel = cancel;
        Engine engine(build_state(enc, plain ? kNoDisjunct : g), enc.pairs, eo);
        outcomes[g].result = engine.solve();
        outcomes[g].ran = true;
    };

    const unsigned jobs = std::max(1u, options.jobs);
    if (jobs <= 1 || groups == 1) {
        for (std::size_t g = 0; g < groups; ++g) {
            run_group(g, options.engine.cancel);
            if (outcomes[g].result.verdict == Verdict::Sat) break;
        }
    } else {
        std::atomic<bool> stop(false);
        std::atomic<std::size_t> cursor(0);
        const auto worker = [&] {
            for (;;) {
                const std::size_t g = cursor.fetch_add(1);
                if (g >= groups || stop.load()) return;
                run_group(g, &stop);
                if (outcomes[g].result.verdict == Verdict::Sat) stop.store(true);
            }
        };
        std::vector<std::thread> pool;
        const unsigned n = std::min<std::size_t>(jobs, groups);
        for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    bool any_timeout = false;
    std::size_t sat_at = kNoDisjunct;
    for (std::size_t g = 0; g < groups; ++g) {
        if (!outcomes[g].ran) continue;
        const SolveStats& s = outcomes[g].result.stats;
        out.totals.pivots += s.pivots;
        out.totals.relu_repairs += s.relu_repairs;
        out.totals.total_splits += s.total_splits;
        out.totals.conflicts += s.conflicts;
        out.totals.tableau_restorations += s.tableau_restorations;
        out.totals.derived_bounds += s.derived_bounds;
        out.totals.max_stack_depth = std::max(out.totals.max_stack_depth, s.max_stack_depth);
        out.totals.wall_seconds += s.wall_seconds;
        if (outcomes[g].result.verdict == Verdict::Sat && sat_at == kNoDisjunct) sat_at = g;
        if (outcomes[g].result.verdict == Verdict::Timeout) any_timeout = true;
    }

    if (sat_at != kNoDisjunct) {
        const SolveResult& r = outcomes[sat_at].result;
        out.verdict = Verdict::Sat;
        out.sat_disjunct = plain ? kNoDisjunct : sat_at;
        out.witness_verified = r.witness_verified;
        out.witness = decode_witness(enc, net, q, r.witness,
                                     options.engine.witness_tolerance);
        return out;
    }
    // Unfinished groups (short-circuit skip or cancel) only exist when some
    // group answered Sat, which returned above; everything here ran.
    out.verdict = any_timeout ? Verdict::Timeout : Verdict::Unsat;
    return out;
}

}  // namespace reluplex
