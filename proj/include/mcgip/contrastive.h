#ifndef MCGIP_CONTRASTIVE_H
#define MCGIP_CONTRASTIVE_H

#include <mcgip/encoder.h>
#include <mcgip/image.h>
#include <mcgip/pairing.h>

#include <cstdint>
#include <vector>

namespace mcgip {

enum class CstKind { InfoNce, L2 };
enum class WeightMode { Binary, Affinity };

/// How accepted off-diagonal pairs enter the batch sum: Both adds the
/// ordered terms (i,j) and (j,i) (the full double sum); Single keeps only
/// (i,j) with i <= j.
enum class PairDirection { Both, Single };

struct LossOptions {
    CstKind cst = CstKind::InfoNce;
    double tau = 0.2;
    WeightMode weight_mode = WeightMode::Binary;
    PairDirection direction = PairDirection::Both;
    // InfoNCE denominator: by default every batch view counts, including
    // accepted positive partners; switching this on drops the other
    // accepted partners of the anchor from the sum.
    bool exclude_positive_partners = false;
};

/// -log softmax of the target view against all batch views at temperature
/// tau. The target must be one of the views; positives are not excluded
/// from the denominator. Nonnegative by construction.
double info_nce(const Embedding& z_i, const Embedding& z_hat_j,
                const std::vector<Embedding>& batch_views, double tau);

/// Squared Euclidean distance of unit vectors, 2 - 2<z_i, z_hat_j>, in [0,4].
double l2_cst(const Embedding& z_i, const Embedding& z_hat_j);

struct PairTerm {
    std::size_t i = 0;
    std::size_t j = 0;
    double weight = 0.0;
    double cst_value = 0.0;
};

struct BatchLossReport {
    double loss = 0.0;
    std::vector<PairTerm> terms;
    double denominator = 0.0; // sum of term weights
};

/// Weighted batch objective over accepted pairs: each term couples the
/// clean embedding of x_i with the augmented view of x_j; weights are 1
/// (binary mode) or the pair affinity. Views are derived from the policy
/// and view_stream, so a fixed stream makes the loss a deterministic
/// function of the encoder parameters.
BatchLossReport mcgip_batch_loss(const std::vector<Image>& batch, const PairSet& pairs,
                                 const ToyEncoder& enc, const AugmentationPolicy& aug,
                                 const LossOptions& opts, std::uint64_t view_stream = 0);

/// Same objective plus analytic d(loss)/d(params); grad must be sized
/// enc.param_count() and is accumulated into.
BatchLossReport mcgip_batch_loss_grad(const std::vector<Image>& batch, const PairSet& pairs,
                                      const ToyEncoder& enc, const AugmentationPolicy& aug,
                                      const LossOptions& opts, std::uint64_t view_stream,
                                      std::vector<double>& grad);

struct TrainConfig {
    int epochs = 50;
    double lr = 0.05;
    int batch_size = 32;
    double threshold_t = 0.7;
    double confidence_p = 1.0;
    std::uint64_t seed = 17;
    LossOptions loss;
    AugmentationPolicy aug;
};

struct TraceRow {
    int epoch = 0;
    double loss = 0.0;
    double mean_pair_count = 0.0; // accepted pairs per batch, diagonal included
};

struct TrainResult {
    ToyEncoder encoder;
    std::vector<TraceRow> trace;
};

/// SGD on the batch objective. Batches are reshuffled every epoch and the
/// affinity matrix is sliced per batch; confidence gating is redrawn per
/// epoch keyed by the unordered id pair. Fully deterministic given seed.
TrainResult train(const std::vector<Image>& images, const AffinityMatrix& affinity,
                  ToyEncoder encoder, const TrainConfig& cfg);

/// Variant that slices a fixed, pre-selected pair set instead of redrawing
/// from an affinity matrix (the `--pairs` file path of the CLI).
TrainResult train_static(const std::vector<Image>& images, const PairSet& global_pairs,
                         ToyEncoder encoder, const TrainConfig& cfg);

std::vector<Embedding> encode_all(const std::vector<Image>& images, const ToyEncoder& enc);

/// Accuracy of a logistic classifier trained on a stratified half of the
/// embeddings and evaluated on the held-out half. Deterministic given seed.
double linear_probe(const std::vector<Embedding>& embeddings, const std::vector<int>& labels,
                    std::uint64_t seed);

} // namespace mcgip

#endif
