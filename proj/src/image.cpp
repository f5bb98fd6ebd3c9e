#include <mcgip/image.h>

#include <mcgip/errors.h>
#include <mcgip/rng.h>

#include <algorithm>
#include <cmath>

namespace mcgip {

namespace {

Image flip_horizontal(const Image& img) {
    Image out = img;
    for (int r = 0; r < img.height; ++r)
        for (int c = 0; c < img.width; ++c)
            out.at(r, c) = img.at(r, img.width - 1 - c);
    return out;
}

double bilinear(const Image& img, double x, double y) {
    const int x0 = std::clamp(static_cast<int>(std::floor(x)), 0, img.width - 1);
    const int y0 = std::clamp(static_cast<int>(std::floor(y)), 0, img.height - 1);
    const int x1 = std::min(x0 + 1, img.width - 1);
    const int y1 = std::min(y0 + 1, img.height - 1);
    const double fx = std::clamp(x - x0, 0.0, 1.0);
    const double fy = std::clamp(y - y0, 0.0, 1.0);
    const double top = img.at(y0, x0) * (1.0 - fx) + img.at(y0, x1) * fx;
    const double bot = img.at(y1, x0) * (1.0 - fx) + img.at(y1, x1) * fx;
    return top * (1.0 - fy) + bot * fy;
}

Image crop_resize(const Image& img, int ox, int oy, int cw, int ch) {
    Image out = img;
    const double sx = static_cast<double>(cw) / img.width;
    const double sy = static_cast<double>(ch) / img.height;
    for (int r = 0; r < img.height; ++r) {
        for (int c = 0; c < img.width; ++c) {
            const double src_x = ox + (c + 0.5) * sx - 0.5;
            const double src_y = oy + (r + 0.5) * sy - 0.5;
            out.at(r, c) = bilinear(img, src_x, src_y);
        }
    }
    return out;
}

} // namespace

Image augment(const Image& img, const AugmentationPolicy& policy, std::uint64_t stream) {
    if (img.width <= 0 || img.height <= 0 || img.pixels.empty())
        throw Error("augment: empty image '" + img.id + "'");
    Rng rng(mix_seed(policy.seed, stream, fnv1a64(img.id)));

    Image out = img;
    if (rng.uniform01() < policy.flip_prob)
        out = flip_horizontal(out);

    const double frac = rng.uniform(policy.crop_min, policy.crop_max);
    const int cw = std::max(1, static_cast<int>(std::lround(img.width * frac)));
    const int ch = std::max(1, static_cast<int>(std::lround(img.height * frac)));
    if (cw < img.width || ch < img.height) {
        const int ox = static_cast<int>(rng.below(static_cast<std::uint64_t>(img.width - cw + 1)));
        const int oy = static_cast<int>(rng.below(static_cast<std::uint64_t>(img.height - ch + 1)));
        out = crop_resize(out, ox, oy, cw, ch);
    }

    if (policy.noise_sigma > 0.0) {
        for (double& p : out.pixels)
            p = std::clamp(p + policy.noise_sigma * rng.normal(), 0.0, 1.0);
    }
    return out;
}

} // namespace mcgip
