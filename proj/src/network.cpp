#include "reluplex/network.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace reluplex {

unsigned Network::hidden_relu_count() const {
    unsigned total = 0;
    for (std::size_t i = 1; i + 1 < layer_sizes.size(); ++i)
        total += layer_sizes[i];
    return total;
}

void Network::validate() const {
    if (layer_sizes.size() < 2)
        throw std::invalid_argument("network needs at least an input and an output layer");
    for (unsigned n : layer_sizes)
        if (n == 0) throw std::invalid_argument("network layer of size zero");
    if (weights.size() != layer_sizes.size() - 1 || biases.size() != weights.size())
        throw std::invalid_argument("network weight/bias block count does not match layers");
    for (std::size_t t = 0; t < weights.size(); ++t) {
        if (weights[t].size() != layer_sizes[t + 1] || biases[t].size() != layer_sizes[t + 1])
            throw std::invalid_argument("network weight matrix rows do not match layer size");
        for (const auto& row : weights[t])
            if (row.size() != layer_sizes[t])
                throw std::invalid_argument("network weight matrix columns do not match layer size");
    }
}

Network::ForwardTrace Network::trace(const std::vector<double>& input) const {
    if (input.size() != num_inputs())
        throw std::invalid_argument("forward input size does not match network");
    ForwardTrace out;
    std::vector<double> act = input;
    for (std::size_t t = 0; t < weights.size(); ++t) {
        std::vector<double> pre(layer_sizes[t + 1]);
        for (std::size_t i = 0; i < pre.size(); ++i) {
            double v = biases[t][i];
            for (std::size_t j = 0; j < act.size(); ++j) v += weights[t][i][j] * act[j];
            pre[i] = v;
        }
        std::vector<double> post = pre;
        const bool is_output = (t + 1 == weights.size());
        if (!is_output)
            for (double& v : post) v = std::max(0.0, v);
        out.pre.push_back(pre);
        out.post.push_back(post);
        act = std::move(post);
    }
    return out;
}

std::vector<double> Network::forward(const std::vector<double>& input) const {
    return trace(input).post.back();
}

Network::IntervalTrace Network::propagate(const std::vector<double>& input_lo,
                                          const std::vector<double>& input_hi) const {
    if (input_lo.size() != num_inputs() || input_hi.size() != num_inputs())
        throw std::invalid_argument("interval input size does not match network");
    for (std::size_t i = 0; i < input_lo.size(); ++i)
        if (input_lo[i] > input_hi[i])
            throw std::invalid_argument("interval input has lower > upper");
    IntervalTrace out;
    std::vector<double> lo = input_lo, hi = input_hi;
    for (std::size_t t = 0; t < weights.size(); ++t) {
        std::vector<double> plo(layer_sizes[t + 1]), phi(layer_sizes[t + 1]);
        for (std::size_t i = 0; i < plo.size(); ++i) {
            double a = biases[t][i], b = biases[t][i];
            for (std::size_t j = 0; j < lo.size(); ++j) {
                const double w = weights[t][i][j];
                if (w >= 0) {
                    a += w * lo[j];
                    b += w * hi[j];
                } else {
                    a += w * hi[j];
                    b += w * lo[j];
                }
            }
            plo[i] = a;
            phi[i] = b;
        }
        std::vector<double> qlo = plo, qhi = phi;
        const bool is_output = (t + 1 == weights.size());
        if (!is_output)
            for (std::size_t i = 0; i < qlo.size(); ++i) {
                qlo[i] = std::max(0.0, qlo[i]);
                qhi[i] = std::max(0.0, qhi[i]);
            }
        out.pre_lo.push_back(plo);
        out.pre_hi.push_back(phi);
        out.post_lo.push_back(std::move(qlo));
        out.post_hi.push_back(std::move(qhi));
        lo = out.post_lo.back();
        hi = out.post_hi.back();
    }
    return out;
}

NetworkParseError::NetworkParseError(unsigned line_, unsigned column_, const std::string& message)
    : std::runtime_error("line " + std::to_string(line_) + ", column " + std::to_string(column_) +
                         ": " + message),
      line(line_),
      column(column_) {}

namespace {

struct Token {
    std::string text;
    unsigned line;
    unsigned column;
};

// One vector of tokens per non-empty line; '#' kills the rest of the line.
std::vector<std::vector<Token>> tokenize(const std::string& text) {
    std::vector<std::vector<Token>> lines;
    unsigned line_no = 1;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        std::vector<Token> toks;
        unsigned col = 1;
        for (std::size_t i = pos; i < eol;) {
            const char c = text[i];
            if (c == '#') break;
            if (c == ' ' || c == '\t' || c == '\r') {
                ++i;
                ++col;
                continue;
            }
            std::size_t j = i;
            unsigned start = col;
            while (j < eol && text[j] != ' ' && text[j] != '\t' && text[j] != '\r' &&
                   text[j] != '#') {
                ++j;
                ++col;
            }
            toks.push_back(Token{text.substr(i, j - i), line_no, start});
            i = j;
        }
        if (!toks.empty()) lines.push_back(std::move(toks));
        if (eol == text.size()) break;
        pos = eol + 1;
        ++line_no;
    }
    return lines;
}

double parse_number(const Token& t) {
    const char* s = t.text.c_str();
    char* end = nullptr;
    const double v = std::strtod(s, &end);
    if (end != s + t.text.size() || t.text.empty())
        throw NetworkParseError(t.line, t.column, "expected a number, got '" + t.text + "'");
    return v;
}

unsigned parse_count(const Token& t, const char* what) {
    const char* s = t.text.c_str();
    char* end = nullptr;
    const long v = std::strtol(s, &end, 10);
    if (end != s + t.text.size() || t.text.empty() || v <= 0)
        throw NetworkParseError(t.line, t.column,
                                std::string("expected a positive ") + what + ", got '" + t.text +
                                    "'");
    return static_cast<unsigned>(v);
}

}  // namespace

Network parse_network(const std::string& text) {
    const auto lines = tokenize(text);
    if (lines.empty()) throw NetworkParseError(1, 1, "empty network description");

    std::size_t cursor = 0;
    const auto& head = lines[cursor];
    if (head[0].text != "layers")
        throw NetworkParseError(head[0].line, head[0].column,
                                "expected 'layers' directive, got '" + head[0].text + "'");
    if (head.size() < 3)
        throw NetworkParseError(head[0].line, head[0].column,
                                "'layers' needs at least two sizes");
    Network net;
    for (std::size_t i = 1; i < head.size(); ++i)
        net.layer_sizes.push_back(parse_count(head[i], "layer size"));
    ++cursor;

    const unsigned L = net.num_layers();
    for (unsigned k = 2; k <= L; ++k) {
        // weights k
        if (cursor >= lines.size()) {
            const Token& last = lines.back().back();
            throw NetworkParseError(last.line, last.column,
                                    "missing 'weights " + std::to_string(k) + "' block");
        }
        const auto& wh = lines[cursor];
        if (wh[0].text != "weights" || wh.size() != 2 ||
            wh[1].text != std::to_string(k))
            throw NetworkParseError(wh[0].line, wh[0].column,
                                    "expected 'weights " + std::to_string(k) + "' here");
        ++cursor;
        const unsigned rows = net.layer_sizes[k - 1];
        const unsigned cols = net.layer_sizes[k - 2];
        std::vector<std::vector<double>> W;
        for (unsigned r = 0; r < rows; ++r) {
            if (cursor >= lines.size()) {
                const Token& last = lines.back().back();
                throw NetworkParseError(last.line, last.column,
                                        "missing weight row " + std::to_string(r + 1) +
                                            " of layer " + std::to_string(k));
            }
            const auto& row = lines[cursor];
            if (row.size() != cols)
                throw NetworkParseError(row[0].line, row[0].column,
                                        "weight row of layer " + std::to_string(k) + " needs " +
                                            std::to_string(cols) + " entries, got " +
                                            std::to_string(row.size()));
            std::vector<double> vals;
            for (const Token& t : row) vals.push_back(parse_number(t));
            W.push_back(std::move(vals));
            ++cursor;
        }
        net.weights.push_back(std::move(W));

        // biases k
        if (cursor >= lines.size()) {
            const Token& last = lines.back().back();
            throw NetworkParseError(last.line, last.column,
                                    "missing 'biases " + std::to_string(k) + "' block");
        }
        const auto& bh = lines[cursor];
        if (bh[0].text != "biases" || bh.size() != 2 ||
            bh[1].text != std::to_string(k))
            throw NetworkParseError(bh[0].line, bh[0].column,
                                    "expected 'biases " + std::to_string(k) + "' here");
        ++cursor;
        if (cursor >= lines.size()) {
            const Token& last = lines.back().back();
            throw NetworkParseError(last.line, last.column,
                                    "missing bias values for layer " + std::to_string(k));
        }
        const auto& bl = lines[cursor];
        if (bl.size() != rows)
            throw NetworkParseError(bl[0].line, bl[0].column,
                                    "bias row of layer " + std::to_string(k) + " needs " +
                                        std::to_string(rows) + " entries, got " +
                                        std::to_string(bl.size()));
        std::vector<double> bias;
        for (const Token& t : bl) bias.push_back(parse_number(t));
        net.biases.push_back(std::move(bias));
        ++cursor;
    }

    if (cursor < lines.size()) {
        const Token& t = lines[cursor][0];
        throw NetworkParseError(t.line, t.column, "unexpected trailing content '" + t.text + "'");
    }
    net.validate();
    return net;
}

Network load_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open network file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_network(buf.str());
    } catch (const NetworkParseError& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

namespace {

std::string trim_number(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

std::string format_network(const Network& net) {
    net.validate();
    std::ostringstream os;
    os << "layers";
    for (unsigned n : net.layer_sizes) os << ' ' << n;
    os << '\n';
    for (std::size_t t = 0; t < net.weights.size(); ++t) {
        const unsigned k = static_cast<unsigned>(t) + 2;
        os << "weights " << k << '\n';
        for (const auto& row : net.weights[t]) {
            for (std::size_t j = 0; j < row.size(); ++j)
                os << (j ? " " : "") << trim_number(row[j]);
            os << '\n';
        }
        os << "biases " << k << '\n';
        for (std::size_t i = 0; i < net.biases[t].size(); ++i)
            os << (i ? " " : "") << trim_number(net.biases[t][i]);
        os << '\n';
    }
    return os.str();
}

void save_network(const Network& net, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write network file '" + path + "'");
    out << format_network(net);
}

}  // namespace reluplex
