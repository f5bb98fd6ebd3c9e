#include <mcgip/multimatch.h>

#include <mcgip/errors.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace mcgip {

DimensionWeights DimensionWeights::make(double w_shape, double w_length, double w_direction,
                                        double w_position, double w_duration) {
    const double ws[5] = {w_shape, w_length, w_direction, w_position, w_duration};
    double sum = 0.0;
    for (double w : ws) {
        if (!(w >= 0.0))
            throw Error("dimension weights must be nonnegative");
        sum += w;
    }
    if (sum <= 0.0)
        throw Error("dimension weights must have a positive sum");
    return {w_shape / sum, w_length / sum, w_direction / sum, w_position / sum, w_duration / sum};
}

double DimensionWeights::of(Dimension d) const {
    switch (d) {
        case Dimension::Shape: return shape;
        case Dimension::Length: return length;
        case Dimension::Direction: return direction;
        case Dimension::Position: return position;
        case Dimension::Duration: return duration;
    }
    return 0.0;
}

double duration_cost(double d1_ms, double d2_ms) {
    if (d1_ms <= 0.0 || d2_ms <= 0.0)
        throw NonPositiveDuration("duration_cost: durations must be positive");
    return std::fabs(d1_ms - d2_ms) / std::max(d1_ms, d2_ms);
}

namespace {

double capped(double v) { return std::min(v, 1.0); }

// Angle between two saccade vectors in [0, pi]. A zero-length saccade has
// no direction; it matches anything at zero cost. The atan2 form is exact
// at identity (cross product of a vector with itself is a true zero).
double direction_angle(std::pair<double, double> u, std::pair<double, double> v) {
    if ((u.first == 0.0 && u.second == 0.0) || (v.first == 0.0 && v.second == 0.0)) return 0.0;
    const double cross = u.first * v.second - u.second * v.first;
    const double dot = u.first * v.first + u.second * v.second;
    return std::atan2(std::fabs(cross), dot);
}

constexpr double kPi = 3.14159265358979323846;

} // namespace

CostMatrix dimension_costs(const FixationSequence& a, const FixationSequence& b, Dimension dim) {
    if (a.fixations.empty() || b.fixations.empty())
        throw EmptySequence("dimension_costs: sequences must be nonempty");

    const double diag = std::max(a.diagonal(), b.diagonal());
    CostMatrix m;

    switch (dim) {
        case Dimension::Duration: {
            m.rows = a.fixations.size();
            m.cols = b.fixations.size();
            m.v.resize(m.rows * m.cols);
            for (std::size_t i = 0; i < m.rows; ++i)
                for (std::size_t j = 0; j < m.cols; ++j)
                    m.at(i, j) = duration_cost(a.fixations[i].duration_ms, b.fixations[j].duration_ms);
            return m;
        }
        case Dimension::Position: {
            m.rows = a.fixations.size();
            m.cols = b.fixations.size();
            m.v.resize(m.rows * m.cols);
            for (std::size_t i = 0; i < m.rows; ++i)
                for (std::size_t j = 0; j < m.cols; ++j) {
                    const double dx = a.fixations[i].x - b.fixations[j].x;
                    const double dy = a.fixations[i].y - b.fixations[j].y;
                    m.at(i, j) = capped(std::hypot(dx, dy) / diag);
                }
            return m;
        }
        default: break;
    }

    if (a.fixations.size() < 2 || b.fixations.size() < 2)
        throw DimensionUndefined("dimension_costs: saccade dimension requested for a 1-fixation sequence");
    const auto sa = a.saccades();
    const auto sb = b.saccades();
    m.rows = sa.size();
    m.cols = sb.size();
    m.v.resize(m.rows * m.cols);
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) {
            switch (dim) {
                case Dimension::Length: {
                    const double lu = std::hypot(sa[i].first, sa[i].second);
                    const double lv = std::hypot(sb[j].first, sb[j].second);
                    m.at(i, j) = capped(std::fabs(lu - lv) / diag);
                    break;
                }
                case Dimension::Direction:
                    m.at(i, j) = direction_angle(sa[i], sb[j]) / kPi;
                    break;
                case Dimension::Shape: {
                    const double dx = sa[i].first - sb[j].first;
                    const double dy = sa[i].second - sb[j].second;
                    m.at(i, j) = capped(std::hypot(dx, dy) / (2.0 * diag));
                    break;
                }
                default: break;
            }
        }
    }
    return m;
}

double dp_min_path_cost(const CostMatrix& S) {
    if (S.rows == 0 || S.cols == 0 || S.v.empty())
        throw Error("dp_min_path_cost: empty cost matrix");
    const std::size_t n = S.rows, mcols = S.cols;
    const double inf = std::numeric_limits<double>::infinity();

    // Layered DP over path length: every step (right/down/diagonal) visits
    // exactly one new cell, so layer k holds the cheapest k-cell path sums.
    // Keeping the layers separate lets us minimize sum/length exactly, the
    // same quantity exhaustive enumeration computes.
    std::vector<double> prev(n * mcols, inf), cur(n * mcols, inf);
    prev[0] = S.v[0];

    const std::size_t max_len = n + mcols - 1;
    double best = (n == 1 && mcols == 1) ? prev[n * mcols - 1] / 1.0 : inf;

    for (std::size_t k = 2; k <= max_len; ++k) {
        std::fill(cur.begin(), cur.end(), inf);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < mcols; ++j) {
                if (i == 0 && j == 0) continue;
                double best_pred = inf;
                if (i > 0) best_pred = std::min(best_pred, prev[(i - 1) * mcols + j]);
                if (j > 0) best_pred = std::min(best_pred, prev[i * mcols + (j - 1)]);
                if (i > 0 && j > 0) best_pred = std::min(best_pred, prev[(i - 1) * mcols + (j - 1)]);
                if (best_pred < inf)
                    cur[i * mcols + j] = best_pred + S.at(i, j);
            }
        }
        const double end = cur[n * mcols - 1];
        if (end < inf)
            best = std::min(best, end / static_cast<double>(k));
        std::swap(prev, cur);
    }
    return best;
}

double multimatch_similarity(const FixationSequence& a, const FixationSequence& b,
                             const DimensionWeights& w) {
    if (a.fixations.empty() || b.fixations.empty())
        throw EmptySequence("multimatch_similarity: sequences must be nonempty");

    const bool saccades_defined = a.fixations.size() >= 2 && b.fixations.size() >= 2;

    double weighted = 0.0, total = 0.0;
    for (Dimension d : kAllDimensions) {
        const bool defined = saccades_defined ||
                             d == Dimension::Position || d == Dimension::Duration;
        if (!defined) continue;
        const double sim = 1.0 - dp_min_path_cost(dimension_costs(a, b, d));
        weighted += w.of(d) * sim;
        total += w.of(d);
    }
    if (total <= 0.0) {
        // all defined dimensions carry zero weight: fall back to their mean
        weighted = 0.0;
        double count = 0.0;
        for (Dimension d : kAllDimensions) {
            const bool defined = saccades_defined ||
                                 d == Dimension::Position || d == Dimension::Duration;
            if (!defined) continue;
            weighted += 1.0 - dp_min_path_cost(dimension_costs(a, b, d));
            count += 1.0;
        }
        return std::clamp(weighted / count, 0.0, 1.0);
    }
    return std::clamp(weighted / total, 0.0, 1.0);
}

} // namespace mcgip
