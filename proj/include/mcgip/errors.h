#ifndef MCGIP_ERRORS_H
#define MCGIP_ERRORS_H

#include <stdexcept>
#include <string>

namespace mcgip {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// gaze
struct EmptyRecording : Error { using Error::Error; };
struct NoFixations : Error { using Error::Error; };
struct EmptySequence : Error { using Error::Error; };

// multimatch
struct NonPositiveDuration : Error { using Error::Error; };
struct DimensionUndefined : Error { using Error::Error; };

// moments
struct ZeroMassHeatmap : Error { using Error::Error; };

// dhash
struct HeatmapTooSmall : Error { using Error::Error; };

// pairing
struct MixedRepresentation : Error { using Error::Error; };

// contrastive
struct UnnormalizedEmbedding : Error { using Error::Error; };
struct EmptyPairSet : Error { using Error::Error; };
struct DivergenceDetected : Error { using Error::Error; };
struct DegenerateLabels : Error { using Error::Error; };

/// Malformed or inconsistent input files; message carries file and line.
struct DataError : Error {
    using Error::Error;
    DataError(const std::string& file, long line, const std::string& what)
        : Error(file + ":" + std::to_string(line) + ": " + what) {}
};

} // namespace mcgip

#endif
