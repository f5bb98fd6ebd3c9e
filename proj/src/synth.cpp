#include <mcgip/synth.h>

#include <mcgip/errors.h>
#include <mcgip/rng.h>

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace mcgip {

namespace {

struct Blob {
    double cx, cy, sigma, peak;
};

// Both classes draw blob size, brightness, background, contrast, and a
// strong oriented illumination gradient from the same distributions; only
// the arrangement (and the gaze that follows it) separates them. The
// nuisance factors dominate raw intensity statistics, so the class is not
// linearly readable from pixels alone.
Image render_image(const std::string& id, int width, int height,
                   const std::vector<Blob>& blobs, double background, double contrast, Rng& rng) {
    Image img;
    img.id = id;
    img.width = width;
    img.height = height;
    img.pixels.assign(static_cast<std::size_t>(width) * height, 0.0);
    const double grad_x = rng.uniform(-0.45, 0.45);
    const double grad_y = rng.uniform(-0.45, 0.45);
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            double v = background + rng.uniform(-0.02, 0.02) +
                       grad_x * ((c + 0.5) / width - 0.5) + grad_y * ((r + 0.5) / height - 0.5);
            for (const Blob& b : blobs) {
                const double dx = (c + 0.5) - b.cx;
                const double dy = (r + 0.5) - b.cy;
                v += b.peak * std::exp(-(dx * dx + dy * dy) / (2.0 * b.sigma * b.sigma));
            }
            img.at(r, c) = std::clamp(contrast * v, 0.0, 1.0);
        }
    }
    return img;
}

double clamp_coord(double v, double extent) {
    return std::clamp(v, 0.25, extent - 0.25);
}

std::string item_name(const char* prefix, int index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s_%03d", prefix, index);
    return buf;
}

std::vector<double> duration_split(Rng& rng, std::size_t n, double total_ms) {
    std::vector<double> weights(n);
    double sum = 0.0;
    for (double& w : weights) {
        w = rng.uniform(0.8, 1.2);
        sum += w;
    }
    for (double& w : weights) w = total_ms * w / sum;
    return weights;
}

// Distractor fixations away from the attended structure: gaze recordings
// carry this kind of noise, and it is what keeps near-duplicate scanpaths
// rare in practice.
void add_stray_fixations(Rng& rng, FixationSequence& seq, double w, double h) {
    const std::size_t n_stray = 1 + rng.below(3);
    for (std::size_t k = 0; k < n_stray; ++k) {
        FixationPoint fp;
        fp.x = clamp_coord(rng.uniform(0.1, 0.9) * w, w);
        fp.y = clamp_coord(rng.uniform(0.1, 0.9) * h, h);
        fp.duration_ms = rng.uniform(40.0, 120.0);
        const std::size_t pos = rng.below(seq.fixations.size() + 1);
        seq.fixations.insert(seq.fixations.begin() + static_cast<std::ptrdiff_t>(pos), fp);
    }
}

Blob draw_blob(Rng& rng, double cx, double cy, double unit) {
    Blob b;
    b.cx = cx;
    b.cy = cy;
    b.sigma = rng.uniform(0.05, 0.08) * unit;
    b.peak = rng.uniform(0.5, 0.8);
    return b;
}

} // namespace

SynthDataset synth_gaze_dataset(const SynthParams& params) {
    if (params.n_per_class < 1)
        throw Error("synth_gaze_dataset: n_per_class must be at least 1");
    if (params.width < 16 || params.height < 16)
        throw Error("synth_gaze_dataset: extent must be at least 16x16");

    const double w = params.width, h = params.height;
    const double unit = std::min(w, h);
    const int n_blobs = 4;
    SynthDataset ds;
    ds.images.reserve(2 * params.n_per_class);
    ds.gaze.reserve(2 * params.n_per_class);
    ds.labels.reserve(2 * params.n_per_class);

    // label 1: the blobs huddle around one spot; gaze dwells there long
    for (int k = 0; k < params.n_per_class; ++k) {
        Rng rng(mix_seed(params.seed, 0xA1, static_cast<std::uint64_t>(k)));
        const std::string id = item_name("a", k);

        const double cx = rng.uniform(0.18, 0.82) * w;
        const double cy = rng.uniform(0.18, 0.82) * h;
        std::vector<Blob> blobs;
        for (int b = 0; b < n_blobs; ++b)
            blobs.push_back(draw_blob(rng, clamp_coord(cx + rng.uniform(-0.09, 0.09) * unit, w),
                                      clamp_coord(cy + rng.uniform(-0.09, 0.09) * unit, h), unit));
        const double background = rng.uniform(0.05, 0.25);
        const double contrast = rng.uniform(0.5, 1.0);
        ds.images.push_back(
            render_image(id, params.width, params.height, blobs, background, contrast, rng));

        FixationSequence seq;
        seq.image_id = id;
        seq.width_px = params.width;
        seq.height_px = params.height;
        const int n_fix = 8;
        const auto durations = duration_split(rng, n_fix, std::exp(rng.uniform(std::log(1100.0), std::log(2600.0))));
        const double jitter = std::exp(rng.uniform(std::log(0.02), std::log(0.10))) * unit;
        for (int f = 0; f < n_fix; ++f) {
            FixationPoint fp;
            fp.x = clamp_coord(cx + jitter * rng.normal(), w);
            fp.y = clamp_coord(cy + jitter * rng.normal(), h);
            fp.duration_ms = durations[f];
            seq.fixations.push_back(fp);
        }
        add_stray_fixations(rng, seq, w, h);
        ds.gaze.push_back(std::move(seq));
        ds.labels.push_back(1);
    }

    // label 0: the same kind of blobs scattered over a jittered 3x3 layout;
    // gaze hops between them briefly
    for (int k = 0; k < params.n_per_class; ++k) {
        Rng rng(mix_seed(params.seed, 0xB0, static_cast<std::uint64_t>(k)));
        const std::string id = item_name("b", k);

        std::vector<std::size_t> cells = {0, 1, 2, 3, 4, 5, 6, 7, 8};
        rng.shuffle(cells);
        std::vector<Blob> blobs;
        for (int b = 0; b < n_blobs; ++b) {
            const std::size_t cell = cells[b];
            const double bx =
                clamp_coord((0.2 + 0.3 * static_cast<double>(cell % 3)) * w + rng.uniform(-0.05, 0.05) * w, w);
            const double by =
                clamp_coord((0.2 + 0.3 * static_cast<double>(cell / 3)) * h + rng.uniform(-0.05, 0.05) * h, h);
            blobs.push_back(draw_blob(rng, bx, by, unit));
        }
        const double background = rng.uniform(0.05, 0.25);
        const double contrast = rng.uniform(0.5, 1.0);
        ds.images.push_back(
            render_image(id, params.width, params.height, blobs, background, contrast, rng));

        FixationSequence seq;
        seq.image_id = id;
        seq.width_px = params.width;
        seq.height_px = params.height;
        const auto durations = duration_split(rng, blobs.size(), std::exp(rng.uniform(std::log(700.0), std::log(1600.0))));
        const double jitter = std::exp(rng.uniform(std::log(0.02), std::log(0.09))) * unit;
        for (std::size_t f = 0; f < blobs.size(); ++f) {
            FixationPoint fp;
            fp.x = clamp_coord(blobs[f].cx + jitter * rng.normal(), w);
            fp.y = clamp_coord(blobs[f].cy + jitter * rng.normal(), h);
            fp.duration_ms = durations[f];
            seq.fixations.push_back(fp);
        }
        add_stray_fixations(rng, seq, w, h);
        ds.gaze.push_back(std::move(seq));
        ds.labels.push_back(0);
    }
    return ds;
}

} // namespace mcgip
