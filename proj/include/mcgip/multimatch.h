#ifndef MCGIP_MULTIMATCH_H
#define MCGIP_MULTIMATCH_H

#include <mcgip/gaze.h>

#include <array>
#include <cstddef>
#include <vector>

namespace mcgip {

enum class Dimension { Shape, Length, Direction, Position, Duration };

constexpr std::array<Dimension, 5> kAllDimensions = {
    Dimension::Shape, Dimension::Length, Dimension::Direction,
    Dimension::Position, Dimension::Duration};

/// Weights of the five sequence features. Renormalized to sum 1 at
/// construction; all entries must be nonnegative with a positive sum.
struct DimensionWeights {
    double shape = 0.2;
    double length = 0.2;
    double direction = 0.2;
    double position = 0.2;
    double duration = 0.2;

    static DimensionWeights uniform() { return {}; }
    static DimensionWeights make(double w_shape, double w_length, double w_direction,
                                 double w_position, double w_duration);
    double of(Dimension d) const;
};

/// Pairwise editing costs for one dimension; all entries in [0,1].
struct CostMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> v;

    double at(std::size_t r, std::size_t c) const { return v[r * cols + c]; }
    double& at(std::size_t r, std::size_t c) { return v[r * cols + c]; }
};

/// Relative duration difference |d1-d2| / max(d1,d2).
double duration_cost(double d1_ms, double d2_ms);

/// Editing-cost matrix for one dimension. Duration/position matrices are
/// len(a) x len(b) over fixations; shape/length/direction are over saccade
/// vectors and require two fixations per sequence (DimensionUndefined
/// otherwise). All costs normalized into [0,1] by the image diagonal (the
/// larger of the two when extents differ).
CostMatrix dimension_costs(const FixationSequence& a, const FixationSequence& b, Dimension dim);

/// Minimum over monotone paths from the top-left to the bottom-right cell
/// (steps right/down/diagonal) of path cost divided by path length.
double dp_min_path_cost(const CostMatrix& S);

/// Weighted sum of per-dimension similarities 1 - dp_min_path_cost(...).
/// Saccade dimensions undefined for single-fixation sequences drop out and
/// the remaining weights are renormalized. Symmetric in (a, b).
double multimatch_similarity(const FixationSequence& a, const FixationSequence& b,
                             const DimensionWeights& w);

} // namespace mcgip

#endif
