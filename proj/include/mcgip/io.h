#ifndef MCGIP_IO_H
#define MCGIP_IO_H

#include <mcgip/contrastive.h>
#include <mcgip/encoder.h>
#include <mcgip/gaze.h>
#include <mcgip/image.h>
#include <mcgip/moments.h>
#include <mcgip/pairing.h>

#include <string>
#include <utility>
#include <vector>

// Text-first file formats. Every writer can embed the effective
// configuration as `# cfg key=value` comment lines so that artifacts carry
// their own provenance; readers hand those lines back for reproduction.

namespace mcgip::io {

using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

/// %.{sig}g with a ".0" appended to bare integers, so similarity 1 prints
/// as "1.0" and parse-then-serialize is byte-stable.
std::string fmt_double(double v, int sig_digits);
std::string fmt_double9(double v);

/// Shortest decimal form that parses back to exactly the same double;
/// used wherever a format promises full precision.
std::string fmt_double_exact(double v);

// --- gaze recordings: `#gazerec v1 <id> <w> <h>`, lines `t_ms,x,y` ---
GazeRecording read_gaze_recording(const std::string& path);
void write_gaze_recording(const std::string& path, const GazeRecording& rec,
                          const ConfigEcho& cfg = {});

// --- fixation sequences: `#fixseq v1 <id> <w> <h>`, lines `x,y,duration_ms` ---
FixationSequence read_fixseq(const std::string& path);
void write_fixseq(const std::string& path, const FixationSequence& seq,
                  const ConfigEcho& cfg = {});

// --- heatmaps: `#heatmap v1 <id> <H> <W>`, H rows of W floats ---
GazeHeatmap read_heatmap(const std::string& path);
void write_heatmap(const std::string& path, const GazeHeatmap& hm, const ConfigEcho& cfg = {});

// --- affinity CSV: `id,<id1>,...` then one row per item, 9 significant digits ---
AffinityMatrix read_affinity_csv(const std::string& path);
void write_affinity_csv(const std::string& path, const AffinityMatrix& A,
                        const ConfigEcho& cfg = {});

// --- pair CSV: header `i,j,affinity,accepted`, ids as strings ---
struct PairRecord {
    std::string id_i;
    std::string id_j;
    double affinity = 0.0;
    bool accepted = false;
};
std::vector<PairRecord> read_pairs_csv(const std::string& path);
void write_pairs_csv(const std::string& path, const AffinityMatrix& A, const PairSet& pairs,
                     const ConfigEcho& cfg = {});

// --- portable graymap (P2 ASCII, maxval 255) ---
Image read_pgm(const std::string& path, const std::string& id);
void write_pgm(const std::string& path, const Image& img, const ConfigEcho& cfg = {});

// --- labels CSV: `id,label` ---
std::vector<std::pair<std::string, int>> read_labels_csv(const std::string& path);
void write_labels_csv(const std::string& path, const std::vector<std::pair<std::string, int>>& labels,
                      const ConfigEcho& cfg = {});

// --- moment vectors CSV: `image_id,mu00,phi1` ---
void write_moments_csv(const std::string& path,
                       const std::vector<std::pair<std::string, MomentVector>>& rows,
                       const ConfigEcho& cfg = {});

// --- trace CSV: `epoch,loss,mean_pair_count` ---
void write_trace_csv(const std::string& path, const std::vector<TraceRow>& trace,
                     const ConfigEcho& cfg = {});

// --- model weights: magic MCGP, version, layer shapes, row-major f32 LE ---
void write_model(const std::string& path, const ToyEncoder& enc);
ToyEncoder read_model(const std::string& path);

/// `# cfg key=value` lines of any text artifact, in file order.
ConfigEcho read_cfg_lines(const std::string& path);

} // namespace mcgip::io

#endif
