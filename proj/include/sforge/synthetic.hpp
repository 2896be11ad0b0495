#pragma once

#include "sforge/hypercube.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sforge {

struct AbsorptionPeak {
    double center_nm = 0.0;
    double width_nm = 1.0;     // Gaussian sigma
    double latent_weight = 0.0; // absorbance per latent unit at the peak
};

// Stand-in for the unavailable field dataset: disk-shaped object on a
// flat background, spectra tied to a per-sample latent value through
// Beer-Lambert absorption peaks.
struct SyntheticSceneSpec {
    int height = 64;
    int width = 64;
    int n_bands = 60;
    double wavelength_min_nm = 400.0;
    double wavelength_max_nm = 1000.0;
    int n_samples = 40;
    int object_radius_px = 20;
    double latent_min = 8.0;
    double latent_max = 18.0;
    std::vector<AbsorptionPeak> absorption_peaks = {
        {540.0, 25.0, 0.030}, {640.0, 30.0, 0.025}, {860.0, 40.0, 0.020}};
    double noise_sd = 0.01; // reflectance-unit sd added to raw frames
    std::uint64_t seed = 0;

    void validate() const; // BadConfig on violated invariants
};

struct SyntheticScene {
    std::string sample_id;
    Hypercube raw;        // counts, noise applied
    Hypercube truth;      // noiseless reflectance
    double latent = 0.0;  // regression target (SSC analog)
    std::vector<std::uint8_t> object_mask; // H*W, 1 inside the disk
};

struct SyntheticDataset {
    Hypercube white; // shared reference frames, counts
    Hypercube dark;
    std::vector<SyntheticScene> scenes;
};

// Deterministic for a fixed spec (seed included). With noise_sd = 0,
// calibrating raw against white/dark reproduces truth exactly.
SyntheticDataset generate_synthetic_scene(const SyntheticSceneSpec& spec);

// The noiseless object reflectance spectrum for a given latent value,
// evaluated on the spec's wavelength grid (shading factor excluded).
std::vector<double> synthetic_object_spectrum(const SyntheticSceneSpec& spec,
                                              double latent);

} // namespace sforge
