#pragma once

#include <stdexcept>
#include <string>

namespace sforge {

// Error hierarchy shared by every module. Each condition named in a
// contract gets its own type so callers can catch precisely.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define SFORGE_ERROR_TYPE(Name)                                   \
    struct Name : Error {                                         \
        explicit Name(const std::string& msg) : Error(msg) {}     \
    }

SFORGE_ERROR_TYPE(MalformedHeader);
SFORGE_ERROR_TYPE(UnsupportedInterleave);
SFORGE_ERROR_TYPE(TruncatedPayload);
SFORGE_ERROR_TYPE(OutOfRange);
SFORGE_ERROR_TYPE(ShapeMismatch);
SFORGE_ERROR_TYPE(DegenerateImage);
SFORGE_ERROR_TYPE(EmptyRoi);
SFORGE_ERROR_TYPE(ZeroVariance);
SFORGE_ERROR_TYPE(DegenerateFit);
SFORGE_ERROR_TYPE(BadWindow);
SFORGE_ERROR_TYPE(BadRatios);
SFORGE_ERROR_TYPE(RankDeficient);
SFORGE_ERROR_TYPE(CoverageError);
SFORGE_ERROR_TYPE(BadPatch);
SFORGE_ERROR_TYPE(DivergenceError);
SFORGE_ERROR_TYPE(IoError);
SFORGE_ERROR_TYPE(ParseError);
SFORGE_ERROR_TYPE(BadConfig);
SFORGE_ERROR_TYPE(StageError);

#undef SFORGE_ERROR_TYPE

} // namespace sforge
