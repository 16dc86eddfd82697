#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace reluplex {

// Feed-forward network with ReLU activations on every hidden layer and a
// linear output layer. weights[t] maps layer t to layer t+1 (0-based, layer 0
// is the input): weights[t][i][j] scales node j of layer t into node i of
// layer t+1; biases[t][i] is added on top.
struct Network {
    std::vector<unsigned> layer_sizes;
    std::vector<std::vector<std::vector<double>>> weights;
    std::vector<std::vector<double>> biases;

    unsigned num_layers() const { return static_cast<unsigned>(layer_sizes.size()); }
    unsigned num_inputs() const { return layer_sizes.front(); }
    unsigned num_outputs() const { return layer_sizes.back(); }
    unsigned hidden_relu_count() const;

    // Pre- and post-activation values for every non-input layer.
    struct ForwardTrace {
        std::vector<std::vector<double>> pre;
        std::vector<std::vector<double>> post;
    };
    ForwardTrace trace(const std::vector<double>& input) const;
    std::vector<double> forward(const std::vector<double>& input) const;

    // Interval propagation of an input box through the layers; pre[t]/post[t]
    // bound the pre- and post-activation values of layer t+1.
    struct IntervalTrace {
        std::vector<std::vector<double>> pre_lo, pre_hi;
        std::vector<std::vector<double>> post_lo, post_hi;
    };
    IntervalTrace propagate(const std::vector<double>& input_lo,
                            const std::vector<double>& input_hi) const;

    void validate() const;  // throws std::invalid_argument on shape mismatch
};

struct NetworkParseError : std::runtime_error {
    NetworkParseError(unsigned line, unsigned column, const std::string& message);
    unsigned line;
    unsigned column;
};

// Text format, line oriented, '#' starts a comment:
//   layers 1 2 1
//   weights 2        <- matrix into layer 2, one row per node of layer 2
//   1
//   -1
//   biases 2
//   0 0
//   weights 3
//   1 1
//   biases 3
//   0
// Blocks must appear in order: weights k, then biases k, for k = 2..L.
Network parse_network(const std::string& text);
Network load_network(const std::string& path);  // wraps IO errors

std::string format_network(const Network& net);
void save_network(const Network& net, const std::string& path);

}  // namespace reluplex
