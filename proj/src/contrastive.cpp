#include <mcgip/contrastive.h>

#include <mcgip/errors.h>
#include <mcgip/rng.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace mcgip {

namespace {

void require_normalized(const Embedding& z, const char* who) {
    if (!z.normalized)
        throw UnnormalizedEmbedding(std::string(who) + ": embedding not normalized");
    double norm_sq = 0.0;
    for (double v : z.values) norm_sq += v * v;
    if (std::fabs(std::sqrt(norm_sq) - 1.0) > 1e-6)
        throw UnnormalizedEmbedding(std::string(who) + ": embedding norm deviates from 1");
}

// stable log sum exp of s[k]/tau
double log_sum_exp_scaled(const std::vector<double>& s, double tau) {
    double m = s[0];
    for (double v : s) m = std::max(m, v);
    m /= tau;
    double acc = 0.0;
    for (double v : s) acc += std::exp(v / tau - m);
    return m + std::log(acc);
}

} // namespace

double info_nce(const Embedding& z_i, const Embedding& z_hat_j,
                const std::vector<Embedding>& batch_views, double tau) {
    if (tau <= 0.0)
        throw Error("info_nce: tau must be positive");
    if (batch_views.empty())
        throw Error("info_nce: no batch views");
    require_normalized(z_i, "info_nce");
    require_normalized(z_hat_j, "info_nce");

    std::size_t target = batch_views.size();
    for (std::size_t k = 0; k < batch_views.size(); ++k) {
        if (batch_views[k].values == z_hat_j.values) {
            target = k;
            break;
        }
    }
    if (target == batch_views.size())
        throw Error("info_nce: target view is not among the batch views");

    std::vector<double> s(batch_views.size());
    for (std::size_t k = 0; k < batch_views.size(); ++k) {
        require_normalized(batch_views[k], "info_nce");
        s[k] = dot(z_i, batch_views[k]);
    }
    return log_sum_exp_scaled(s, tau) - s[target] / tau;
}

double l2_cst(const Embedding& z_i, const Embedding& z_hat_j) {
    require_normalized(z_i, "l2_cst");
    require_normalized(z_hat_j, "l2_cst");
    return std::clamp(2.0 - 2.0 * dot(z_i, z_hat_j), 0.0, 4.0);
}

namespace {

struct LossWork {
    std::vector<Embedding> clean;
    std::vector<Embedding> views;
    std::vector<ToyEncoder::ForwardCache> clean_cache;
    std::vector<ToyEncoder::ForwardCache> view_cache;
    std::vector<PairTerm> terms;
};

// Expands the accepted pairs into ordered loss terms and encodes every
// clean image and augmented view once.
LossWork prepare_batch(const std::vector<Image>& batch, const PairSet& pairs,
                       const ToyEncoder& enc, const AugmentationPolicy& aug,
                       const LossOptions& opts, std::uint64_t view_stream, bool want_cache) {
    const std::size_t n = batch.size();
    if (n == 0)
        throw Error("mcgip_batch_loss: empty batch");

    std::set<std::pair<std::size_t, std::size_t>> seen;
    LossWork work;
    for (const PairEntry& e : pairs.pairs) {
        if (e.i > e.j || e.j >= n)
            throw Error("mcgip_batch_loss: pair (" + std::to_string(e.i) + "," +
                        std::to_string(e.j) + ") outside batch of " + std::to_string(n));
        if (!seen.insert({e.i, e.j}).second)
            throw Error("mcgip_batch_loss: duplicate pair (" + std::to_string(e.i) + "," +
                        std::to_string(e.j) + ")");
        if (!e.accepted) continue;
        const double w = opts.weight_mode == WeightMode::Binary ? 1.0 : e.affinity;
        work.terms.push_back({e.i, e.j, w, 0.0});
        if (e.i != e.j && opts.direction == PairDirection::Both)
            work.terms.push_back({e.j, e.i, w, 0.0});
    }
    if (work.terms.empty())
        throw EmptyPairSet("mcgip_batch_loss: no accepted pairs (diagonal missing from pair set)");

    work.clean.resize(n);
    work.views.resize(n);
    if (want_cache) {
        work.clean_cache.resize(n);
        work.view_cache.resize(n);
    }
    for (std::size_t k = 0; k < n; ++k) {
        // view randomness is keyed by (policy seed, stream, image id), never
        // by batch position, so permuting a batch permutes the loss terms
        const Image view = augment(batch[k], aug, view_stream);
        if (want_cache) {
            work.clean[k] = enc.encode(batch[k].pixels, work.clean_cache[k]);
            work.views[k] = enc.encode(view.pixels, work.view_cache[k]);
        } else {
            work.clean[k] = enc.encode(batch[k].pixels);
            work.views[k] = enc.encode(view.pixels);
        }
    }
    return work;
}

BatchLossReport batch_loss_impl(const std::vector<Image>& batch, const PairSet& pairs,
                                const ToyEncoder& enc, const AugmentationPolicy& aug,
                                const LossOptions& opts, std::uint64_t view_stream,
                                std::vector<double>* grad) {
    LossWork work = prepare_batch(batch, pairs, enc, aug, opts, view_stream, grad != nullptr);
    const std::size_t n = batch.size();

    double weight_sum = 0.0;
    for (const PairTerm& t : work.terms) weight_sum += t.weight;
    if (weight_sum <= 0.0)
        throw Error("mcgip_batch_loss: accepted pairs carry zero total weight");

    // per-term cst values (and, for the gradient pass, d loss / d embedding)
    std::vector<std::vector<double>> d_clean, d_views;
    if (grad) {
        d_clean.assign(n, std::vector<double>(enc.output_dim, 0.0));
        d_views.assign(n, std::vector<double>(enc.output_dim, 0.0));
    }

    // accepted-partner mask, used when positives are dropped from InfoNCE
    // denominators
    std::vector<char> partner;
    if (opts.cst == CstKind::InfoNce && opts.exclude_positive_partners) {
        partner.assign(n * n, 0);
        for (const PairEntry& e : pairs.pairs) {
            if (!e.accepted) continue;
            partner[e.i * n + e.j] = 1;
            partner[e.j * n + e.i] = 1;
        }
    }

    std::vector<double> s;
    std::vector<std::size_t> included;
    double numerator = 0.0;
    for (PairTerm& t : work.terms) {
        const Embedding& zi = work.clean[t.i];
        if (opts.cst == CstKind::L2) {
            const double d = dot(zi, work.views[t.j]);
            t.cst_value = std::clamp(2.0 - 2.0 * d, 0.0, 4.0);
            if (grad) {
                const double coeff = -2.0 * t.weight / weight_sum;
                for (int e = 0; e < enc.output_dim; ++e) {
                    d_clean[t.i][e] += coeff * work.views[t.j].values[e];
                    d_views[t.j][e] += coeff * zi.values[e];
                }
            }
        } else {
            included.clear();
            for (std::size_t k = 0; k < n; ++k) {
                if (!partner.empty() && k != t.j && partner[t.i * n + k]) continue;
                included.push_back(k);
            }
            s.resize(included.size());
            std::size_t target_pos = 0;
            for (std::size_t kk = 0; kk < included.size(); ++kk) {
                s[kk] = dot(zi, work.views[included[kk]]);
                if (included[kk] == t.j) target_pos = kk;
            }
            const double lse = log_sum_exp_scaled(s, opts.tau);
            t.cst_value = lse - s[target_pos] / opts.tau;
            if (grad) {
                const double coeff = t.weight / weight_sum;
                for (std::size_t kk = 0; kk < included.size(); ++kk) {
                    const std::size_t k = included[kk];
                    const double soft = std::exp(s[kk] / opts.tau - lse);
                    const double ds = coeff * (soft - (k == t.j ? 1.0 : 0.0)) / opts.tau;
                    if (ds == 0.0) continue;
                    for (int e = 0; e < enc.output_dim; ++e) {
                        d_clean[t.i][e] += ds * work.views[k].values[e];
                        d_views[k][e] += ds * zi.values[e];
                    }
                }
            }
        }
        numerator += t.weight * t.cst_value;
    }

    if (grad) {
        for (std::size_t k = 0; k < n; ++k) {
            enc.backward(work.clean_cache[k], d_clean[k], *grad);
            enc.backward(work.view_cache[k], d_views[k], *grad);
        }
    }

    BatchLossReport report;
    report.loss = numerator / weight_sum;
    report.terms = std::move(work.terms);
    report.denominator = weight_sum;
    return report;
}

} // namespace

BatchLossReport mcgip_batch_loss(const std::vector<Image>& batch, const PairSet& pairs,
                                 const ToyEncoder& enc, const AugmentationPolicy& aug,
                                 const LossOptions& opts, std::uint64_t view_stream) {
    return batch_loss_impl(batch, pairs, enc, aug, opts, view_stream, nullptr);
}

BatchLossReport mcgip_batch_loss_grad(const std::vector<Image>& batch, const PairSet& pairs,
                                      const ToyEncoder& enc, const AugmentationPolicy& aug,
                                      const LossOptions& opts, std::uint64_t view_stream,
                                      std::vector<double>& grad) {
    if (grad.size() != enc.param_count())
        throw Error("mcgip_batch_loss_grad: gradient buffer has wrong size");
    return batch_loss_impl(batch, pairs, enc, aug, opts, view_stream, &grad);
}

namespace {

std::size_t count_accepted(const PairSet& ps) {
    std::size_t c = 0;
    for (const PairEntry& e : ps.pairs)
        if (e.accepted) ++c;
    return c;
}

TrainResult train_impl(const std::vector<Image>& images, const AffinityMatrix* affinity,
                       const PairSet* global_pairs, ToyEncoder encoder, const TrainConfig& cfg) {
    if (images.empty())
        throw Error("train: empty dataset");
    if (cfg.epochs < 0 || cfg.lr < 0.0 || cfg.batch_size <= 0)
        throw Error("train: invalid schedule");

    // dataset position -> affinity row
    std::vector<std::size_t> aff_index(images.size());
    if (affinity) {
        for (std::size_t k = 0; k < images.size(); ++k) {
            const auto it = std::find(affinity->ids.begin(), affinity->ids.end(), images[k].id);
            if (it == affinity->ids.end())
                throw Error("train: image '" + images[k].id + "' missing from affinity matrix");
            aff_index[k] = static_cast<std::size_t>(it - affinity->ids.begin());
        }
    }

    TrainResult result;
    result.trace.reserve(cfg.epochs);
    std::vector<std::size_t> order(images.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> grad(encoder.param_count());

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        Rng shuffle_rng(mix_seed(cfg.seed, 0x65706f6368ULL, static_cast<std::uint64_t>(epoch)));
        shuffle_rng.shuffle(order);

        double loss_sum = 0.0, pair_sum = 0.0;
        std::size_t batches = 0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t end = std::min(order.size(), start + cfg.batch_size);
            std::vector<Image> batch;
            batch.reserve(end - start);
            for (std::size_t k = start; k < end; ++k) batch.push_back(images[order[k]]);

            PairSet pairs;
            if (affinity) {
                AffinityMatrix slice;
                slice.ids.reserve(batch.size());
                for (const Image& im : batch) slice.ids.push_back(im.id);
                slice.a.assign(batch.size() * batch.size(), 0.0);
                for (std::size_t bi = 0; bi < batch.size(); ++bi)
                    for (std::size_t bj = 0; bj < batch.size(); ++bj)
                        slice.at(bi, bj) = affinity->at(aff_index[order[start + bi]],
                                                        aff_index[order[start + bj]]);
                // confidence gating redrawn per epoch, keyed by the id pair
                pairs = select_pairs(slice, cfg.threshold_t, cfg.confidence_p,
                                     mix_seed(cfg.seed, 0x67617465ULL, static_cast<std::uint64_t>(epoch)));
            } else {
                pairs.threshold_t = global_pairs->threshold_t;
                pairs.confidence_p = global_pairs->confidence_p;
                pairs.seed = global_pairs->seed;
                std::vector<std::size_t> pos_of(images.size(), images.size());
                for (std::size_t bi = 0; bi < batch.size(); ++bi)
                    pos_of[order[start + bi]] = bi;
                for (const PairEntry& e : global_pairs->pairs) {
                    const std::size_t bi = pos_of[e.i], bj = pos_of[e.j];
                    if (bi >= images.size() || bj >= images.size()) continue;
                    pairs.pairs.push_back({std::min(bi, bj), std::max(bi, bj), e.affinity, e.accepted});
                }
            }

            std::fill(grad.begin(), grad.end(), 0.0);
            const std::uint64_t view_stream =
                mix_seed(cfg.seed, static_cast<std::uint64_t>(epoch), static_cast<std::uint64_t>(batches));
            const BatchLossReport report =
                mcgip_batch_loss_grad(batch, pairs, encoder, cfg.aug, cfg.loss, view_stream, grad);
            if (!std::isfinite(report.loss))
                throw DivergenceDetected("train: non-finite loss at epoch " + std::to_string(epoch));

            for (std::size_t k = 0; k < encoder.params.size(); ++k)
                encoder.params[k] -= cfg.lr * grad[k];

            loss_sum += report.loss;
            pair_sum += static_cast<double>(count_accepted(pairs));
            ++batches;
        }
        result.trace.push_back({epoch, loss_sum / static_cast<double>(batches),
                                pair_sum / static_cast<double>(batches)});
    }
    result.encoder = std::move(encoder);
    return result;
}

} // namespace

TrainResult train(const std::vector<Image>& images, const AffinityMatrix& affinity,
                  ToyEncoder encoder, const TrainConfig& cfg) {
    return train_impl(images, &affinity, nullptr, std::move(encoder), cfg);
}

TrainResult train_static(const std::vector<Image>& images, const PairSet& global_pairs,
                         ToyEncoder encoder, const TrainConfig& cfg) {
    for (const PairEntry& e : global_pairs.pairs)
        if (e.i >= images.size() || e.j >= images.size())
            throw Error("train_static: pair set references indices outside the dataset");
    return train_impl(images, nullptr, &global_pairs, std::move(encoder), cfg);
}

std::vector<Embedding> encode_all(const std::vector<Image>& images, const ToyEncoder& enc) {
    std::vector<Embedding> out;
    out.reserve(images.size());
    for (const Image& im : images) out.push_back(enc.encode(im.pixels));
    return out;
}

double linear_probe(const std::vector<Embedding>& embeddings, const std::vector<int>& labels,
                    std::uint64_t seed) {
    if (embeddings.size() != labels.size() || embeddings.empty())
        throw Error("linear_probe: embeddings and labels must align and be nonempty");
    std::vector<std::size_t> class0, class1;
    for (std::size_t k = 0; k < labels.size(); ++k) {
        if (labels[k] == 0) class0.push_back(k);
        else if (labels[k] == 1) class1.push_back(k);
        else throw DegenerateLabels("linear_probe: labels must be 0 or 1");
    }
    if (class0.size() < 2 || class1.size() < 2)
        throw DegenerateLabels("linear_probe: need at least two samples per class");

    // stratified half split
    std::vector<std::size_t> train_idx, test_idx;
    for (auto* cls : {&class0, &class1}) {
        Rng rng(mix_seed(seed, 0x73706c6974ULL, cls == &class0 ? 0 : 1));
        rng.shuffle(*cls);
        const std::size_t half = cls->size() / 2;
        for (std::size_t k = 0; k < cls->size(); ++k)
            (k < half ? train_idx : test_idx).push_back((*cls)[k]);
    }

    const std::size_t dim = embeddings[0].values.size();
    std::vector<double> w(dim + 1, 0.0); // last entry is the bias

    const double lr = 0.5;
    const int iters = 400;
    for (int it = 0; it < iters; ++it) {
        std::vector<double> g(dim + 1, 0.0);
        for (std::size_t idx : train_idx) {
            const auto& x = embeddings[idx].values;
            double a = w[dim];
            for (std::size_t k = 0; k < dim; ++k) a += w[k] * x[k];
            const double p = 1.0 / (1.0 + std::exp(-a));
            const double err = p - static_cast<double>(labels[idx]);
            for (std::size_t k = 0; k < dim; ++k) g[k] += err * x[k];
            g[dim] += err;
        }
        const double inv_n = 1.0 / static_cast<double>(train_idx.size());
        for (std::size_t k = 0; k <= dim; ++k) w[k] -= lr * inv_n * g[k];
    }

    std::size_t correct = 0;
    for (std::size_t idx : test_idx) {
        const auto& x = embeddings[idx].values;
        double a = w[dim];
        for (std::size_t k = 0; k < dim; ++k) a += w[k] * x[k];
        if ((a >= 0.0 ? 1 : 0) == labels[idx]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(test_idx.size());
}

} // namespace mcgip
