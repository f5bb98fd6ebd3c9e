#include <mcgip/dhash.h>

#include <mcgip/errors.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>

namespace mcgip {

std::vector<double> area_downsample(const GazeHeatmap& h, int out_rows, int out_cols) {
    std::vector<double> out(static_cast<std::size_t>(out_rows) * out_cols, 0.0);
    const double row_step = static_cast<double>(h.rows) / out_rows;
    const double col_step = static_cast<double>(h.cols) / out_cols;

    for (int orow = 0; orow < out_rows; ++orow) {
        const double r0 = orow * row_step;
        const double r1 = (orow + 1) * row_step;
        for (int ocol = 0; ocol < out_cols; ++ocol) {
            const double c0 = ocol * col_step;
            const double c1 = (ocol + 1) * col_step;

            double acc = 0.0, area = 0.0;
            const int ir_end = std::min(h.rows - 1, static_cast<int>(std::ceil(r1)) - 1);
            const int ic_end = std::min(h.cols - 1, static_cast<int>(std::ceil(c1)) - 1);
            for (int ir = static_cast<int>(std::floor(r0)); ir <= ir_end; ++ir) {
                const double rw = std::min<double>(ir + 1, r1) - std::max<double>(ir, r0);
                if (rw <= 0.0) continue;
                for (int ic = static_cast<int>(std::floor(c0)); ic <= ic_end; ++ic) {
                    const double cw = std::min<double>(ic + 1, c1) - std::max<double>(ic, c0);
                    if (cw <= 0.0) continue;
                    acc += h.at(ir, ic) * (rw * cw);
                    area += rw * cw;
                }
            }
            out[static_cast<std::size_t>(orow) * out_cols + ocol] = acc / area;
        }
    }
    return out;
}

DHashCode dhash_encode(const GazeHeatmap& h, DiffDirection dir) {
    const int need_rows = dir == DiffDirection::Row ? 8 : 9;
    const int need_cols = dir == DiffDirection::Row ? 9 : 8;
    if (h.rows < need_rows || h.cols < need_cols)
        throw HeatmapTooSmall("dhash_encode: heatmap '" + h.image_id + "' is " +
                              std::to_string(h.rows) + "x" + std::to_string(h.cols) +
                              ", need at least " + std::to_string(need_rows) + "x" +
                              std::to_string(need_cols));

    const std::vector<double> g = area_downsample(h, need_rows, need_cols);
    DHashCode code;
    for (int r = 0; r < 8; ++r) {
        for (int c = 0; c < 8; ++c) {
            // adjacent-cell difference along the chosen direction; ties
            // (d == 0) encode as 0
            const double d = dir == DiffDirection::Row
                                 ? g[r * 9 + (c + 1)] - g[r * 9 + c]
                                 : g[(r + 1) * 8 + c] - g[r * 8 + c];
            if (d > 0.0)
                code.bits |= 1ULL << (63 - (r * 8 + c));
        }
    }
    return code;
}

double dhash_similarity(DHashCode a, DHashCode b) {
    const int na = std::popcount(a.bits);
    const int nb = std::popcount(b.bits);
    if (na == 0 && nb == 0) return 1.0;
    if (na == 0 || nb == 0) return 0.0;
    const int dot = std::popcount(a.bits & b.bits);
    return dot / std::sqrt(static_cast<double>(na) * static_cast<double>(nb));
}

std::string dhash_to_hex(DHashCode code) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(code.bits));
    return buf;
}

DHashCode dhash_from_hex(const std::string& hex) {
    if (hex.size() != 16)
        throw Error("dhash_from_hex: expected 16 hex digits, got '" + hex + "'");
    std::uint64_t bits = 0;
    for (char ch : hex) {
        int v;
        if (ch >= '0' && ch <= '9') v = ch - '0';
        else if (ch >= 'a' && ch <= 'f') v = ch - 'a' + 10;
        else if (ch >= 'A' && ch <= 'F') v = ch - 'A' + 10;
        else throw Error("dhash_from_hex: invalid hex digit in '" + hex + "'");
        bits = (bits << 4) | static_cast<std::uint64_t>(v);
    }
    return {bits};
}

} // namespace mcgip
