#include "sforge/synthetic.hpp"
#include "sforge/errors.hpp"
#include "sforge/rng.hpp"

#include <cmath>
#include <cstdio>

namespace sforge {

namespace {

// Potato-like object baseline: low in the blue, rising through the red
// edge onto a NIR plateau.
double object_baseline(double wl_nm) {
    return 0.25 + 0.45 / (1.0 + std::exp(-(wl_nm - 520.0) / 40.0));
}

constexpr double kBackgroundReflectance = 0.10;

double absorbance(const SyntheticSceneSpec& spec, double wl_nm, double latent) {
    double a = 0.0;
    for (const auto& p : spec.absorption_peaks) {
        const double d = (wl_nm - p.center_nm) / p.width_nm;
        a += p.latent_weight * latent * std::exp(-0.5 * d * d);
    }
    return a;
}

double white_counts(double wl_nm) {
    const double d = (wl_nm - 650.0) / 250.0;
    return 2000.0 + 1200.0 * std::exp(-d * d);
}

constexpr double kDarkCounts = 100.0;

} // namespace

void SyntheticSceneSpec::validate() const {
    if (height <= 0 || width <= 0) throw BadConfig("scene dimensions must be positive");
    if (n_bands < 3) throw BadConfig("n_bands must be >= 3");
    if (!(wavelength_min_nm < wavelength_max_nm))
        throw BadConfig("wavelength range must be increasing");
    if (n_samples < 0) throw BadConfig("n_samples must be >= 0");
    if (object_radius_px < 0) throw BadConfig("object_radius_px must be >= 0");
    if (!(latent_min <= latent_max)) throw BadConfig("latent range must be ordered");
    if (noise_sd < 0.0) throw BadConfig("noise_sd must be >= 0");
    for (const auto& p : absorption_peaks) {
        if (p.center_nm < wavelength_min_nm || p.center_nm > wavelength_max_nm)
            throw BadConfig("absorption peak outside wavelength range");
        if (!(p.width_nm > 0.0)) throw BadConfig("peak width must be positive");
    }
}

std::vector<double> synthetic_object_spectrum(const SyntheticSceneSpec& spec,
                                              double latent) {
    auto wl = linspace(spec.wavelength_min_nm, spec.wavelength_max_nm, spec.n_bands);
    std::vector<double> r(wl.size());
    for (std::size_t b = 0; b < wl.size(); ++b)
        r[b] = object_baseline(wl[b]) * std::exp(-absorbance(spec, wl[b], latent));
    return r;
}

SyntheticDataset generate_synthetic_scene(const SyntheticSceneSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);

    auto wl = linspace(spec.wavelength_min_nm, spec.wavelength_max_nm, spec.n_bands);

    SyntheticDataset out;
    out.white = Hypercube(spec.height, spec.width, spec.n_bands, wl, CubeKind::raw_counts);
    out.dark = Hypercube(spec.height, spec.width, spec.n_bands, wl, CubeKind::raw_counts);
    for (int r = 0; r < spec.height; ++r)
        for (int c = 0; c < spec.width; ++c)
            for (int b = 0; b < spec.n_bands; ++b) {
                out.white.at(r, c, b) = white_counts(wl[b]);
                out.dark.at(r, c, b) = kDarkCounts;
            }

    // Latents drawn up front so scene content is independent of the
    // per-pixel noise stream ordering.
    std::vector<double> latents(spec.n_samples);
    for (int s = 0; s < spec.n_samples; ++s)
        latents[s] = rng.uniform(spec.latent_min, spec.latent_max);

    const double cy = (spec.height - 1) / 2.0;
    const double cx = (spec.width - 1) / 2.0;
    const double radius2 = static_cast<double>(spec.object_radius_px) * spec.object_radius_px;

    out.scenes.reserve(spec.n_samples);
    for (int s = 0; s < spec.n_samples; ++s) {
        SyntheticScene scene;
        char id[16];
        std::snprintf(id, sizeof id, "s%04d", s + 1);
        scene.sample_id = id;
        scene.latent = latents[s];
        scene.truth = Hypercube(spec.height, spec.width, spec.n_bands, wl,
                                CubeKind::reflectance);
        scene.raw = Hypercube(spec.height, spec.width, spec.n_bands, wl,
                              CubeKind::raw_counts);
        scene.object_mask.assign(static_cast<std::size_t>(spec.height) * spec.width, 0);

        std::vector<double> object_r = synthetic_object_spectrum(spec, latents[s]);

        for (int r = 0; r < spec.height; ++r) {
            for (int c = 0; c < spec.width; ++c) {
                const double d2 = (r - cy) * (r - cy) + (c - cx) * (c - cx);
                const bool inside = spec.object_radius_px > 0 && d2 <= radius2;
                if (inside)
                    scene.object_mask[static_cast<std::size_t>(r) * spec.width + c] = 1;
                // gentle radial shading so the object is not spatially flat
                const double shade = inside ? 1.0 - 0.15 * (d2 / radius2) : 1.0;
                for (int b = 0; b < spec.n_bands; ++b) {
                    const double refl =
                        inside ? object_r[b] * shade : kBackgroundReflectance;
                    scene.truth.at(r, c, b) = refl;
                    const double noisy =
                        spec.noise_sd > 0.0 ? refl + rng.gaussian(0.0, spec.noise_sd) : refl;
                    scene.raw.at(r, c, b) =
                        kDarkCounts + noisy * (white_counts(wl[b]) - kDarkCounts);
                }
            }
        }
        out.scenes.push_back(std::move(scene));
    }
    return out;
}

} // namespace sforge
