#ifndef MCGIP_PAIRING_H
#define MCGIP_PAIRING_H

#include <mcgip/dhash.h>
#include <mcgip/gaze.h>
#include <mcgip/multimatch.h>

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace mcgip {

/// Symmetric n x n gaze-similarity matrix with unit diagonal, entries in
/// [0,1], indexed in the order of `ids`.
struct AffinityMatrix {
    std::vector<std::string> ids;
    std::vector<double> a; // row-major n x n

    std::size_t size() const { return ids.size(); }
    double at(std::size_t i, std::size_t j) const { return a[i * ids.size() + j]; }
    double& at(std::size_t i, std::size_t j) { return a[i * ids.size() + j]; }

    /// Enforces symmetry (exact), unit diagonal, and range; throws Error.
    void validate() const;
};

struct PairEntry {
    std::size_t i = 0;
    std::size_t j = 0; // i <= j; i == j marks a diagonal self-pair
    double affinity = 0.0;
    bool accepted = false;
};

/// Candidate positive pairs for one batch under (t, p). Off-diagonal
/// entries all satisfy affinity >= t; diagonal pairs are always accepted.
struct PairSet {
    std::vector<PairEntry> pairs;
    double threshold_t = 0.7;
    double confidence_p = 0.5;
    std::uint64_t seed = 0;
};

enum class Scheme { MultiMatch, Moment, DHash };

struct SchemeParams {
    DimensionWeights mm_weights = DimensionWeights::uniform();
    double alpha = 0.5;
    DiffDirection dhash_direction = DiffDirection::Row;
};

Scheme scheme_from_name(const std::string& name);
std::string scheme_name(Scheme s);

using GazeItem = std::variant<FixationSequence, GazeHeatmap>;

const std::string& item_id(const GazeItem& item);

/// Pairwise similarity of one item pair under a scheme (shared by
/// build_affinity and the sim command).
double scheme_similarity(const GazeItem& a, const GazeItem& b, Scheme scheme,
                         const SchemeParams& params);

/// Fills the affinity matrix by computing each unordered pair once
/// (optionally across `jobs` worker threads; the result does not depend
/// on the schedule). Items must all match the scheme's representation.
AffinityMatrix build_affinity(const std::vector<GazeItem>& items, Scheme scheme,
                              const SchemeParams& params, int jobs = 1);

/// Deterministic uniform draw in [0,1) keyed by the seed and the
/// unordered id pair; independent of id order and of matrix indices.
double pair_uniform(std::uint64_t seed, const std::string& id1, const std::string& id2);

/// Off-diagonal pairs with affinity >= t become candidates; each is
/// accepted independently with probability p via pair_uniform. Diagonal
/// pairs are always listed and accepted. Bit-deterministic given seed.
PairSet select_pairs(const AffinityMatrix& A, double t, double p, std::uint64_t seed);

/// Candidate (off-diagonal, affinity >= t) counts per threshold;
/// thresholds must be sorted ascending.
std::vector<std::pair<double, std::size_t>> pair_count_curve(const AffinityMatrix& A,
                                                             const std::vector<double>& thresholds);

} // namespace mcgip

#endif
