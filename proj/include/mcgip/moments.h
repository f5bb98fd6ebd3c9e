#ifndef MCGIP_MOMENTS_H
#define MCGIP_MOMENTS_H

#include <mcgip/gaze.h>

namespace mcgip {

/// Low-order description of a heatmap: total gaze mass (ms) and the
/// dispersion invariant (mu20 + mu02) / mu00^2.
struct MomentVector {
    double mu00 = 0.0;
    double phi1 = 0.0;
};

/// Central moment of order (p, q) about the mass centroid, summed over
/// grid cells with cell centers as coordinates. (0,0) is the total mass.
/// Orders above p + q = 2 are outside this library's needs and rejected.
double central_moment(const GazeHeatmap& h, int p, int q);

MomentVector moment_vector(const GazeHeatmap& h);

/// One minus the normalized L1 distance per component, blended by alpha:
/// alpha on the mass term, 1 - alpha on the dispersion term. delta(0,0)
/// counts as zero distance.
double moment_affinity(const MomentVector& m1, const MomentVector& m2, double alpha);

} // namespace mcgip

#endif
