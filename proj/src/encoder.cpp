#include <mcgip/encoder.h>

#include <mcgip/errors.h>
#include <mcgip/rng.h>

#include <cmath>

namespace mcgip {

Embedding make_embedding(std::vector<double> values) {
    double norm_sq = 0.0;
    for (double v : values) norm_sq += v * v;
    const double norm = std::sqrt(norm_sq);
    if (!(norm > 0.0))
        throw Error("make_embedding: zero vector cannot be normalized");
    for (double& v : values) v /= norm;
    return {std::move(values), true};
}

double dot(const Embedding& a, const Embedding& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.values.size(); ++k) s += a.values[k] * b.values[k];
    return s;
}

ToyEncoder ToyEncoder::init(int input_dim, int hidden_dim, int output_dim, std::uint64_t seed) {
    if (input_dim <= 0 || hidden_dim <= 0 || output_dim <= 0)
        throw Error("ToyEncoder::init: dimensions must be positive");
    ToyEncoder enc;
    enc.input_dim = input_dim;
    enc.hidden_dim = hidden_dim;
    enc.output_dim = output_dim;
    enc.params.resize(enc.param_count());

    Rng rng(mix_seed(seed, 0x7061726d73ULL)); // "params"
    const double s1 = 1.0 / std::sqrt(static_cast<double>(input_dim));
    const double s2 = 1.0 / std::sqrt(static_cast<double>(hidden_dim));
    std::size_t k = 0;
    for (int i = 0; i < hidden_dim * input_dim; ++i) enc.params[k++] = rng.uniform(-s1, s1);
    for (int i = 0; i < hidden_dim; ++i) enc.params[k++] = rng.uniform(-0.1, 0.1);
    for (int i = 0; i < output_dim * hidden_dim; ++i) enc.params[k++] = rng.uniform(-s2, s2);
    for (int i = 0; i < output_dim; ++i) enc.params[k++] = rng.uniform(-0.1, 0.1);
    return enc;
}

Embedding ToyEncoder::encode(std::span<const double> input) const {
    ForwardCache cache;
    return encode(input, cache);
}

Embedding ToyEncoder::encode(std::span<const double> input, ForwardCache& cache) const {
    if (static_cast<int>(input.size()) != input_dim)
        throw Error("ToyEncoder::encode: input size " + std::to_string(input.size()) +
                    " does not match input_dim " + std::to_string(input_dim));

    cache.input.assign(input.begin(), input.end());
    cache.hidden_pre.assign(hidden_dim, 0.0);
    cache.hidden.assign(hidden_dim, 0.0);
    cache.out_pre.assign(output_dim, 0.0);

    const double* w1 = params.data() + w1_offset();
    const double* b1 = params.data() + b1_offset();
    const double* w2 = params.data() + w2_offset();
    const double* b2 = params.data() + b2_offset();

    for (int i = 0; i < hidden_dim; ++i) {
        double acc = b1[i];
        const double* row = w1 + static_cast<std::size_t>(i) * input_dim;
        for (int j = 0; j < input_dim; ++j) acc += row[j] * input[j];
        cache.hidden_pre[i] = acc;
        cache.hidden[i] = acc > 0.0 ? acc : 0.0;
    }
    double norm_sq = 0.0;
    for (int i = 0; i < output_dim; ++i) {
        double acc = b2[i];
        const double* row = w2 + static_cast<std::size_t>(i) * hidden_dim;
        for (int j = 0; j < hidden_dim; ++j) acc += row[j] * cache.hidden[j];
        cache.out_pre[i] = acc;
        norm_sq += acc * acc;
    }
    cache.out_norm = std::sqrt(norm_sq);
    if (!(cache.out_norm > 0.0))
        throw DivergenceDetected("ToyEncoder::encode: zero pre-normalization output");

    Embedding z;
    z.values.resize(output_dim);
    for (int i = 0; i < output_dim; ++i) z.values[i] = cache.out_pre[i] / cache.out_norm;
    z.normalized = true;
    return z;
}

void ToyEncoder::backward(const ForwardCache& cache, std::span<const double> d_embedding,
                          std::vector<double>& grad) const {
    if (grad.size() != param_count())
        throw Error("ToyEncoder::backward: gradient buffer has wrong size");

    // through normalization z = y / |y|:  dy = (g - (g.z) z) / |y|
    double g_dot_z = 0.0;
    for (int i = 0; i < output_dim; ++i)
        g_dot_z += d_embedding[i] * (cache.out_pre[i] / cache.out_norm);
    std::vector<double> dy(output_dim);
    for (int i = 0; i < output_dim; ++i) {
        const double zi = cache.out_pre[i] / cache.out_norm;
        dy[i] = (d_embedding[i] - g_dot_z * zi) / cache.out_norm;
    }

    double* g_w1 = grad.data() + w1_offset();
    double* g_b1 = grad.data() + b1_offset();
    double* g_w2 = grad.data() + w2_offset();
    double* g_b2 = grad.data() + b2_offset();
    const double* w2 = params.data() + w2_offset();

    std::vector<double> dh(hidden_dim, 0.0);
    for (int i = 0; i < output_dim; ++i) {
        g_b2[i] += dy[i];
        double* grow = g_w2 + static_cast<std::size_t>(i) * hidden_dim;
        const double* wrow = w2 + static_cast<std::size_t>(i) * hidden_dim;
        for (int j = 0; j < hidden_dim; ++j) {
            grow[j] += dy[i] * cache.hidden[j];
            dh[j] += wrow[j] * dy[i];
        }
    }
    for (int i = 0; i < hidden_dim; ++i) {
        const double da = cache.hidden_pre[i] > 0.0 ? dh[i] : 0.0;
        if (da == 0.0) continue;
        g_b1[i] += da;
        double* grow = g_w1 + static_cast<std::size_t>(i) * input_dim;
        for (int j = 0; j < input_dim; ++j) grow[j] += da * cache.input[j];
    }
}

} // namespace mcgip
