#include "reluplex/robustness.hpp"

#include <algorithm>
#include <stdexcept>

namespace reluplex {

unsigned classify(const std::vector<double>& scores, bool argmax) {
    if (scores.empty()) throw std::invalid_argument("classify on an empty score vector");
    std::size_t best = 0;
    for (std::size_t j = 1; j < scores.size(); ++j) {
        if (argmax ? scores[j] > scores[best] : scores[j] < scores[best]) best = j;
    }
    return static_cast<unsigned>(best);
}

RobustnessResult check_local(const Network& net, const std::vector<double>& x0, double delta,
                             const RobustnessOptions& opts) {
    if (delta < 0) throw std::invalid_argument("negative robustness radius");
    if (x0.size() != net.num_inputs())
        throw std::invalid_argument("robustness point size does not match network inputs");
    if (net.num_outputs() < 2)
        throw std::invalid_argument("classification needs at least two outputs");

    RobustnessResult out;
    out.label = classify(net.forward(x0), opts.argmax);

    Query q;
    q.name = "local-robustness";
    for (double v : x0) {
        q.input_lower.push_back(v - delta);
        q.input_upper.push_back(v + delta);
    }
    // One disjunct per challenger: it beats the label by at least the margin.
    std::vector<unsigned> challenger;
    for (unsigned j = 0; j < net.num_outputs(); ++j) {
        if (j == out.label) continue;
        std::vector<double> coeffs(net.num_outputs(), 0.0);
        // argmin: s_j <= s_label - margin; argmax mirrored.
        coeffs[j] = opts.argmax ? -1.0 : 1.0;
        coeffs[out.label] = opts.argmax ? 1.0 : -1.0;
        q.disjuncts.push_back({QueryConstraint{coeffs, Relation::LessEq, -opts.margin}});
        challenger.push_back(j);
    }

    const QueryResult r = solve_query(net, q, opts.solve);
    out.totals = r.totals;
    if (r.verdict == Verdict::Sat) {
        out.robust = false;
        out.adversarial_label = challenger.at(r.sat_disjunct);
        out.counterexample = r.witness;
    } else if (r.verdict == Verdict::Unsat && !r.under_approximate) {
        out.robust = true;
    } else {
        out.inconclusive = true;
    }
    return out;
}

RadiusSearch search_local_radius(const Network& net, const std::vector<double>& x0,
                                 double max_delta, double tolerance,
                                 const RobustnessOptions& opts) {
    if (max_delta <= 0) throw std::invalid_argument("radius search needs max_delta > 0");
    if (tolerance <= 0) throw std::invalid_argument("radius search needs tolerance > 0");

    RadiusSearch out;
    const auto accumulate = [&](const RobustnessResult& r) {
        ++out.queries;
        out.inconclusive = out.inconclusive || r.inconclusive;
    };

    // Degenerate high endpoint: robust everywhere we can see.
    RobustnessResult top = check_local(net, x0, max_delta, opts);
    accumulate(top);
    if (top.robust) {
        out.robust_delta = max_delta;
        return out;
    }
    out.fragile_delta = max_delta;
    out.last_failure = top;

    double lo = 0.0, hi = max_delta;
    while (hi - lo > tolerance) {
        const double mid = 0.5 * (lo + hi);
        RobustnessResult r = check_local(net, x0, mid, opts);
        accumulate(r);
        if (r.robust) {
            lo = mid;
        } else {
            // Inconclusive answers shrink from above too: the radius is only
            // certified where the check actually held.
            hi = mid;
            if (!r.inconclusive) {
                out.fragile_delta = mid;
                out.last_failure = r;
            }
        }
    }
    out.robust_delta = lo;
    return out;
}

Network doubled_network(const Network& net) {
    net.validate();
    Network d;
    for (unsigned n : net.layer_sizes) d.layer_sizes.push_back(2 * n);
    for (std::size_t t = 0; t < net.weights.size(); ++t) {
        const unsigned rows = net.layer_sizes[t + 1];
        const unsigned cols = net.layer_sizes[t];
        std::vector<std::vector<double>> W(2 * rows, std::vector<double>(2 * cols, 0.0));
        std::vector<double> b(2 * rows);
        for (unsigned i = 0; i < rows; ++i) {
            for (unsigned j = 0; j < cols; ++j) {
                W[i][j] = net.weights[t][i][j];
                W[rows + i][cols + j] = net.weights[t][i][j];
            }
            b[i] = net.biases[t][i];
            b[rows + i] = net.biases[t][i];
        }
        d.weights.push_back(std::move(W));
        d.biases.push_back(std::move(b));
    }
    return d;
}

GlobalRobustnessResult check_global(const Network& net, const std::vector<double>& domain_lower,
                                    const std::vector<double>& domain_upper, double delta,
                                    double epsilon, const RobustnessOptions& opts) {
    if (delta < 0) throw std::invalid_argument("negative robustness radius");
    if (epsilon <= 0) throw std::invalid_argument("global robustness needs epsilon > 0");
    if (domain_lower.size() != net.num_inputs() || domain_upper.size() != net.num_inputs())
        throw std::invalid_argument("domain box size does not match network inputs");

    const Network twin = doubled_network(net);
    const unsigned n = net.num_inputs();
    const unsigned m = net.num_outputs();

    Query q;
    q.name = "global-robustness";
    for (int copy = 0; copy < 2; ++copy)
        for (unsigned i = 0; i < n; ++i) {
            q.input_lower.push_back(domain_lower[i]);
            q.input_upper.push_back(domain_upper[i]);
        }
    for (unsigned i = 0; i < n; ++i) {
        std::vector<double> plus(2 * n, 0.0), minus(2 * n, 0.0);
        plus[i] = 1.0;
        plus[n + i] = -1.0;
        minus[i] = -1.0;
        minus[n + i] = 1.0;
        q.input_constraints.push_back({plus, Relation::LessEq, delta});
        q.input_constraints.push_back({minus, Relation::LessEq, delta});
    }
    // Violation: some output drifts by >= epsilon + margin in either direction.
    for (unsigned j = 0; j < m; ++j)
        for (int dir = 0; dir < 2; ++dir) {
            std::vector<double> coeffs(2 * m, 0.0);
            coeffs[j] = dir ? -1.0 : 1.0;
            coeffs[m + j] = dir ? 1.0 : -1.0;
            q.disjuncts.push_back(
                {QueryConstraint{coeffs, Relation::GreaterEq, epsilon + opts.margin}});
        }

    const QueryResult r = solve_query(twin, q, opts.solve);
    GlobalRobustnessResult out;
    out.totals = r.totals;
    if (r.verdict == Verdict::Sat) {
        out.robust = false;
        out.output = static_cast<unsigned>(r.sat_disjunct / 2);
        out.pair_witness = r.witness;
    } else if (r.verdict == Verdict::Unsat && !r.under_approximate) {
        out.robust = true;
    } else {
        out.inconclusive = true;
    }
    return out;
}

}  // namespace reluplex
