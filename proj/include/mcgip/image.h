#ifndef MCGIP_IMAGE_H
#define MCGIP_IMAGE_H

#include <cstdint>
#include <string>
#include <vector>

namespace mcgip {

/// Grayscale image, intensities in [0,1], row-major.
struct Image {
    std::string id;
    int width = 0;
    int height = 0;
    std::vector<double> pixels;

    double at(int r, int c) const { return pixels[static_cast<std::size_t>(r) * width + c]; }
    double& at(int r, int c) { return pixels[static_cast<std::size_t>(r) * width + c]; }
};

/// Stochastic view transforms applied in order: horizontal flip, random
/// crop with resize back to the original extent, additive Gaussian noise.
/// All randomness comes from (seed, stream); a given pair always produces
/// the same view.
struct AugmentationPolicy {
    double flip_prob = 0.5;
    double crop_min = 0.75; // crop side as a fraction of the image side
    double crop_max = 1.0;
    double noise_sigma = 0.05;
    std::uint64_t seed = 0;
};

Image augment(const Image& img, const AugmentationPolicy& policy, std::uint64_t stream);

} // namespace mcgip

#endif
