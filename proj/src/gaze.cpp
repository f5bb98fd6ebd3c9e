#include <mcgip/gaze.h>

#include <mcgip/errors.h>

#include <algorithm>
#include <cmath>

namespace mcgip {

GazeRecording make_gaze_recording(std::string image_id, int width_px, int height_px,
                                  std::vector<GazeSample> samples) {
    if (width_px <= 0 || height_px <= 0)
        throw Error("gaze recording '" + image_id + "': extent must be positive");
    GazeRecording rec;
    rec.image_id = std::move(image_id);
    rec.width_px = width_px;
    rec.height_px = height_px;
    rec.samples.reserve(samples.size());
    for (const GazeSample& s : samples) {
        if (s.x < 0.0 || s.x >= width_px || s.y < 0.0 || s.y >= height_px)
            continue; // out-of-extent samples are dropped, not clamped
        if (!rec.samples.empty() && s.t_ms <= rec.samples.back().t_ms)
            throw Error("gaze recording '" + rec.image_id + "': timestamps not strictly increasing");
        rec.samples.push_back(s);
    }
    return rec;
}

std::vector<std::pair<double, double>> FixationSequence::saccades() const {
    std::vector<std::pair<double, double>> out;
    if (fixations.size() < 2) return out;
    out.reserve(fixations.size() - 1);
    for (std::size_t k = 0; k + 1 < fixations.size(); ++k)
        out.emplace_back(fixations[k + 1].x - fixations[k].x, fixations[k + 1].y - fixations[k].y);
    return out;
}

double FixationSequence::diagonal() const {
    return std::sqrt(static_cast<double>(width_px) * width_px +
                     static_cast<double>(height_px) * height_px);
}

double GazeHeatmap::total_mass() const {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum;
}

namespace {

struct WindowBounds {
    double min_x, max_x, min_y, max_y;

    explicit WindowBounds(const GazeSample& s)
        : min_x(s.x), max_x(s.x), min_y(s.y), max_y(s.y) {}

    void add(const GazeSample& s) {
        min_x = std::min(min_x, s.x);
        max_x = std::max(max_x, s.x);
        min_y = std::min(min_y, s.y);
        max_y = std::max(max_y, s.y);
    }

    double dispersion() const { return (max_x - min_x) + (max_y - min_y); }
};

} // namespace

FixationSequence detect_fixations(const GazeRecording& rec, double dispersion_px,
                                  double min_duration_ms) {
    if (dispersion_px <= 0.0 || min_duration_ms <= 0.0)
        throw Error("detect_fixations: dispersion and min duration must be positive");
    const auto& s = rec.samples;
    if (s.empty())
        throw EmptyRecording("recording '" + rec.image_id + "' has no valid samples");

    FixationSequence seq;
    seq.image_id = rec.image_id;
    seq.width_px = rec.width_px;
    seq.height_px = rec.height_px;

    std::size_t i = 0;
    const std::size_t n = s.size();
    while (i < n) {
        // smallest window starting at i whose time-lapse reaches min duration
        std::size_t j = i;
        while (j + 1 < n && s[j].t_ms - s[i].t_ms < min_duration_ms) ++j;
        if (s[j].t_ms - s[i].t_ms < min_duration_ms)
            break; // later windows only get shorter
        WindowBounds bounds(s[i]);
        for (std::size_t k = i + 1; k <= j; ++k) bounds.add(s[k]);
        if (bounds.dispersion() <= dispersion_px) {
            while (j + 1 < n) {
                WindowBounds next = bounds;
                next.add(s[j + 1]);
                if (next.dispersion() > dispersion_px) break;
                bounds = next;
                ++j;
            }
            double sx = 0.0, sy = 0.0;
            for (std::size_t k = i; k <= j; ++k) {
                sx += s[k].x;
                sy += s[k].y;
            }
            const double count = static_cast<double>(j - i + 1);
            seq.fixations.push_back({sx / count, sy / count, s[j].t_ms - s[i].t_ms});
            i = j + 1;
        } else {
            ++i;
        }
    }

    if (seq.fixations.empty())
        throw NoFixations("recording '" + rec.image_id + "': no cluster satisfies the minimum duration");
    return seq;
}

GazeHeatmap render_heatmap(const FixationSequence& seq, double sigma_px, double grid_scale) {
    if (sigma_px <= 0.0 || grid_scale <= 0.0)
        throw Error("render_heatmap: sigma and grid scale must be positive");
    if (seq.fixations.empty())
        throw EmptySequence("render_heatmap: sequence '" + seq.image_id + "' is empty");

    GazeHeatmap hm;
    hm.image_id = seq.image_id;
    hm.rows = static_cast<int>(std::ceil(seq.height_px * grid_scale));
    hm.cols = static_cast<int>(std::ceil(seq.width_px * grid_scale));
    hm.values.assign(static_cast<std::size_t>(hm.rows) * hm.cols, 0.0);

    const double sigma = sigma_px * grid_scale;
    const double radius = 3.0 * sigma;
    const double inv_two_sigma_sq = 1.0 / (2.0 * sigma * sigma);

    for (const FixationPoint& f : seq.fixations) {
        const double cx = f.x * grid_scale;
        const double cy = f.y * grid_scale;
        const int c_lo = static_cast<int>(std::floor(cx - radius - 0.5));
        const int c_hi = static_cast<int>(std::ceil(cx + radius - 0.5));
        const int r_lo = static_cast<int>(std::floor(cy - radius - 0.5));
        const int r_hi = static_cast<int>(std::ceil(cy + radius - 0.5));

        // kernel over cell centers within 3 sigma; normalized over the full
        // truncated disc (including cells off the grid) so border fixations
        // lose mass instead of inflating it
        double weight_sum = 0.0;
        for (int r = r_lo; r <= r_hi; ++r) {
            for (int c = c_lo; c <= c_hi; ++c) {
                const double dx = (c + 0.5) - cx;
                const double dy = (r + 0.5) - cy;
                const double d2 = dx * dx + dy * dy;
                if (d2 > radius * radius) continue;
                weight_sum += std::exp(-d2 * inv_two_sigma_sq);
            }
        }
        if (weight_sum <= 0.0) {
            // degenerate sigma: dump the mass into the containing cell
            int c = std::clamp(static_cast<int>(cx), 0, hm.cols - 1);
            int r = std::clamp(static_cast<int>(cy), 0, hm.rows - 1);
            hm.at(r, c) += f.duration_ms;
            continue;
        }
        const double scale = f.duration_ms / weight_sum;
        for (int r = std::max(r_lo, 0); r <= std::min(r_hi, hm.rows - 1); ++r) {
            for (int c = std::max(c_lo, 0); c <= std::min(c_hi, hm.cols - 1); ++c) {
                const double dx = (c + 0.5) - cx;
                const double dy = (r + 0.5) - cy;
                const double d2 = dx * dx + dy * dy;
                if (d2 > radius * radius) continue;
                hm.at(r, c) += scale * std::exp(-d2 * inv_two_sigma_sq);
            }
        }
    }
    return hm;
}

} // namespace mcgip
