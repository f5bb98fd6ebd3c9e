#include <mcgip/moments.h>

#include <mcgip/errors.h>

#include <algorithm>
#include <cmath>

namespace mcgip {

namespace {

double total_and_centroid(const GazeHeatmap& h, double& cx, double& cy) {
    double mass = 0.0, sx = 0.0, sy = 0.0;
    for (int r = 0; r < h.rows; ++r) {
        for (int c = 0; c < h.cols; ++c) {
            const double f = h.at(r, c);
            mass += f;
            sx += (c + 0.5) * f;
            sy += (r + 0.5) * f;
        }
    }
    if (mass > 0.0) {
        cx = sx / mass;
        cy = sy / mass;
    }
    return mass;
}

} // namespace

double central_moment(const GazeHeatmap& h, int p, int q) {
    if (h.values.empty())
        throw Error("central_moment: empty heatmap");
    if (p < 0 || q < 0 || p + q > 2)
        throw Error("central_moment: only orders p+q <= 2 are supported");

    double cx = 0.0, cy = 0.0;
    const double mass = total_and_centroid(h, cx, cy);
    if (p == 0 && q == 0) return mass;
    if (mass <= 0.0)
        throw ZeroMassHeatmap("central_moment: centroid undefined for zero-mass heatmap '" +
                              h.image_id + "'");

    double acc = 0.0;
    for (int r = 0; r < h.rows; ++r) {
        for (int c = 0; c < h.cols; ++c) {
            const double f = h.at(r, c);
            if (f == 0.0) continue;
            double term = f;
            const double dx = (c + 0.5) - cx;
            const double dy = (r + 0.5) - cy;
            for (int k = 0; k < p; ++k) term *= dx;
            for (int k = 0; k < q; ++k) term *= dy;
            acc += term;
        }
    }
    return acc;
}

MomentVector moment_vector(const GazeHeatmap& h) {
    const double mu00 = central_moment(h, 0, 0);
    if (mu00 <= 0.0)
        throw ZeroMassHeatmap("moment_vector: zero-mass heatmap '" + h.image_id + "'");
    const double inertia = central_moment(h, 2, 0) + central_moment(h, 0, 2);
    return {mu00, inertia / (mu00 * mu00)};
}

double moment_affinity(const MomentVector& m1, const MomentVector& m2, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw Error("moment_affinity: alpha must be in [0,1]");
    const auto delta = [](double x, double y) {
        const double hi = std::max(x, y);
        if (hi == 0.0) return 0.0; // identical zeros are zero-distance
        return std::fabs(x - y) / hi;
    };
    const double a = alpha * (1.0 - delta(m1.mu00, m2.mu00)) +
                     (1.0 - alpha) * (1.0 - delta(m1.phi1, m2.phi1));
    return std::clamp(a, 0.0, 1.0);
}

} // namespace mcgip
