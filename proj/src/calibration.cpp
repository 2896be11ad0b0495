#include "sforge/calibration.hpp"
#include "sforge/errors.hpp"

#include <cmath>

namespace sforge {

namespace {

void require_same_shape(const Hypercube& a, const Hypercube& b, const char* what) {
    if (a.height != b.height || a.width != b.width || a.bands != b.bands)
        throw ShapeMismatch(std::string(what) + ": cube shapes differ");
    if (a.wavelengths_nm != b.wavelengths_nm)
        throw ShapeMismatch(std::string(what) + ": wavelength axes differ");
}

} // namespace

CalibrationResult calibrate_reflectance(const Hypercube& raw,
                                        const ReferenceFrames& refs,
                                        double r_max) {
    require_same_shape(raw, refs.white, "calibrate");
    require_same_shape(raw, refs.dark, "calibrate");
    if (!(refs.epsilon > 0.0)) throw BadConfig("epsilon must be positive");

    CalibrationResult result;
    result.reflectance = Hypercube(raw.height, raw.width, raw.bands,
                                   raw.wavelengths_nm, CubeKind::reflectance);
    result.valid.assign(raw.size(), 1);

    for (std::size_t i = 0; i < raw.size(); ++i) {
        const double denom = refs.white.data[i] - refs.dark.data[i];
        double v = 0.0;
        bool ok = denom > refs.epsilon;
        if (ok) {
            v = (raw.data[i] - refs.dark.data[i]) / denom;
            ok = std::isfinite(v);
        }
        if (!ok) {
            result.valid[i] = 0;
            ++result.invalid_count;
            v = 0.0;
        } else {
            if (v < 0.0) v = 0.0;
            if (v > r_max) v = r_max;
        }
        result.reflectance.data[i] = v;
    }
    return result;
}

} // namespace sforge
