#pragma once

#include "sforge/hypercube.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace sforge {

struct BinaryMask {
    int height = 0;
    int width = 0;
    std::vector<std::uint8_t> data; // H*W, 1 = inside ROI
    std::size_t true_count = 0;

    bool at(int row, int col) const {
        return data[static_cast<std::size_t>(row) * width + col] != 0;
    }
};

struct SampleSpectrum {
    std::string sample_id;
    std::vector<double> spectrum;
    int n_replicates = 1;
};

// Otsu's threshold over a 256-bin histogram of the values (entries with
// include[i] == 0 are skipped when include is nonempty). Returns the
// chosen bin index; a pixel belongs to the foreground when its bin
// index is greater. DegenerateImage when the values have no spread.
int otsu_bin_threshold(const std::vector<double>& values,
                       const std::vector<std::uint8_t>& include,
                       double vmin, double vmax);

// Foreground = pixels where band(hi_nm) - band(lo_nm) falls above the
// Otsu split of the difference image. Calibration-invalid pixels (at
// either band) are excluded from the histogram and forced to background.
// valid may be empty (all elements trusted) or cube-element aligned.
BinaryMask band_difference_mask(const Hypercube& cube,
                                const std::vector<std::uint8_t>& valid = {},
                                double hi_nm = 602.0, double lo_nm = 452.0);

// Optional cleanup: keep only the largest 4-connected foreground
// component. Off by default; the standard mask is used as produced.
BinaryMask largest_component(const BinaryMask& mask);

// Per-band arithmetic mean over ROI pixels, invalid elements excluded.
std::vector<double> mean_roi_spectrum(const Hypercube& cube, const BinaryMask& mask,
                                      const std::vector<std::uint8_t>& valid = {});

// Element-wise mean of the spectra sharing a sample_id; output sorted
// by sample_id.
std::vector<SampleSpectrum> average_replicates(
    const std::vector<std::pair<std::string, std::vector<double>>>& spectra);

void write_mask_png(const std::string& path, const BinaryMask& mask);
BinaryMask read_mask_png(const std::string& path);

// CSV with header: sample_id, wl_<nm>, ...
void write_spectra_csv(const std::string& path,
                       const std::vector<SampleSpectrum>& samples,
                       const std::vector<double>& wavelengths_nm);
std::pair<std::vector<SampleSpectrum>, std::vector<double>>
read_spectra_csv(const std::string& path);

} // namespace sforge
