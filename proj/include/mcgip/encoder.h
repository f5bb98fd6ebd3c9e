#ifndef MCGIP_ENCODER_H
#define MCGIP_ENCODER_H

#include <cstdint>
#include <span>
#include <vector>

namespace mcgip {

/// Point on the unit sphere produced by an encoder (or built by hand in
/// tests). `normalized` records whether the Euclidean norm is 1.
struct Embedding {
    std::vector<double> values;
    bool normalized = false;
};

/// Normalizes in place and flags the result; throws on zero vectors.
Embedding make_embedding(std::vector<double> values);

double dot(const Embedding& a, const Embedding& b);

/// Two-layer map input -> hidden (ReLU) -> output, followed by Euclidean
/// normalization. Parameters live in one flat vector laid out as
/// W1 (hidden x input, row-major), b1, W2 (output x hidden), b2 so that
/// optimizers and finite-difference probes can treat them uniformly.
struct ToyEncoder {
    int input_dim = 0;
    int hidden_dim = 0;
    int output_dim = 0;
    std::vector<double> params;

    static ToyEncoder init(int input_dim, int hidden_dim, int output_dim, std::uint64_t seed);

    std::size_t w1_offset() const { return 0; }
    std::size_t b1_offset() const { return static_cast<std::size_t>(hidden_dim) * input_dim; }
    std::size_t w2_offset() const { return b1_offset() + hidden_dim; }
    std::size_t b2_offset() const { return w2_offset() + static_cast<std::size_t>(output_dim) * hidden_dim; }
    std::size_t param_count() const { return b2_offset() + output_dim; }

    /// Intermediate activations kept for the backward pass.
    struct ForwardCache {
        std::vector<double> input;
        std::vector<double> hidden_pre;
        std::vector<double> hidden;
        std::vector<double> out_pre;
        double out_norm = 0.0;
    };

    Embedding encode(std::span<const double> input) const;
    Embedding encode(std::span<const double> input, ForwardCache& cache) const;

    /// Accumulates d(loss)/d(params) into grad (sized param_count) given
    /// d(loss)/d(embedding) for the cached forward pass.
    void backward(const ForwardCache& cache, std::span<const double> d_embedding,
                  std::vector<double>& grad) const;
};

} // namespace mcgip

#endif
