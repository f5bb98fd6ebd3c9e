#ifndef MCGIP_SYNTH_H
#define MCGIP_SYNTH_H

#include <mcgip/gaze.h>
#include <mcgip/image.h>

#include <cstdint>
#include <vector>

namespace mcgip {

struct SynthParams {
    int n_per_class = 100;
    int width = 32;
    int height = 32;
    std::uint64_t seed = 7;
};

/// Two-pattern benchmark. Label 1 ("a_*"): one compact bright blob with
/// tightly clustered, long fixations. Label 0 ("b_*"): several small
/// scattered blobs with spread-out, short fixations. Both classes share a
/// random global-brightness nuisance so raw intensity alone does not
/// separate them. Generation is per-item seeded and bit-reproducible.
struct SynthDataset {
    std::vector<Image> images;
    std::vector<FixationSequence> gaze;
    std::vector<int> labels;
};

SynthDataset synth_gaze_dataset(const SynthParams& params);

} // namespace mcgip

#endif
