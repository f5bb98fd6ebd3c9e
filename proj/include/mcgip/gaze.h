#ifndef MCGIP_GAZE_H
#define MCGIP_GAZE_H

#include <string>
#include <vector>

namespace mcgip {

struct GazeSample {
    double t_ms = 0.0;
    double x = 0.0;
    double y = 0.0;
};

/// Raw timestamped gaze samples for one image, in pixel coordinates.
/// Construct through make_gaze_recording so the invariants hold:
/// timestamps strictly increasing, out-of-extent samples dropped.
struct GazeRecording {
    std::string image_id;
    int width_px = 0;
    int height_px = 0;
    std::vector<GazeSample> samples;
};

/// Drops samples outside [0,width) x [0,height); rejects non-increasing
/// timestamps (checked on the kept samples).
GazeRecording make_gaze_recording(std::string image_id, int width_px, int height_px,
                                  std::vector<GazeSample> samples);

struct FixationPoint {
    double x = 0.0;        // cluster centroid
    double y = 0.0;
    double duration_ms = 0.0;
};

/// Ordered fixations for one image (the gaze-sequence representation).
struct FixationSequence {
    std::string image_id;
    int width_px = 0;
    int height_px = 0;
    std::vector<FixationPoint> fixations;

    /// Offsets between consecutive fixation centroids; size = fixations-1.
    std::vector<std::pair<double, double>> saccades() const;
    double diagonal() const;
};

/// Dense nonnegative grid of gaze density; entries are milliseconds of
/// gaze mass per cell, row-major.
struct GazeHeatmap {
    std::string image_id;
    int rows = 0;
    int cols = 0;
    std::vector<double> values;

    double at(int r, int c) const { return values[static_cast<std::size_t>(r) * cols + c]; }
    double& at(int r, int c) { return values[static_cast<std::size_t>(r) * cols + c]; }
    double total_mass() const;
};

/// Dispersion-threshold (I-DT) fixation detection. A cluster is a maximal
/// sample window with (max_x-min_x)+(max_y-min_y) <= dispersion_px whose
/// time-lapse is at least min_duration_ms; its centroid and time-lapse
/// become the fixation. Throws EmptyRecording / NoFixations.
FixationSequence detect_fixations(const GazeRecording& rec, double dispersion_px,
                                  double min_duration_ms);

/// Duration-weighted Gaussian rendering. Grid dimensions are
/// ceil(extent * grid_scale); each fixation deposits its duration through
/// a unit-mass isotropic kernel (sigma scaled by grid_scale, truncated at
/// 3 sigma), so total mass equals total duration unless the kernel is
/// clipped by the border.
GazeHeatmap render_heatmap(const FixationSequence& seq, double sigma_px, double grid_scale);

} // namespace mcgip

#endif
