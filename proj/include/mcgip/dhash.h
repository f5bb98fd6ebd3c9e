#ifndef MCGIP_DHASH_H
#define MCGIP_DHASH_H

#include <mcgip/gaze.h>

#include <cstdint>
#include <string>
#include <vector>

namespace mcgip {

enum class DiffDirection { Row, Col };

/// 64-bit difference-hash code. Bit layout is row-major with the most
/// significant bit at cell (r=0, c=0); hex form is 16 digits.
struct DHashCode {
    std::uint64_t bits = 0;

    bool bit(int r, int c) const { return (bits >> (63 - (r * 8 + c))) & 1u; }
    bool operator==(const DHashCode&) const = default;
};

/// Area-average downsample with fractional edge weighting; deterministic
/// for any source size at least out_rows x out_cols.
std::vector<double> area_downsample(const GazeHeatmap& h, int out_rows, int out_cols);

/// Downsample to 8x9 (or 9x8 for column direction), difference adjacent
/// cells along the chosen direction, threshold strictly above zero.
/// Requires the heatmap to be at least as large as the downsampled grid.
DHashCode dhash_encode(const GazeHeatmap& h, DiffDirection dir = DiffDirection::Row);

/// Cosine similarity of the flattened 64-bit masks. Two all-zero codes
/// read as identical (1.0); exactly one all-zero reads as 0.0.
double dhash_similarity(DHashCode a, DHashCode b);

std::string dhash_to_hex(DHashCode code);
DHashCode dhash_from_hex(const std::string& hex);

} // namespace mcgip

#endif
