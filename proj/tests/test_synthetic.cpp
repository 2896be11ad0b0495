#include "sforge/calibration.hpp"
#include "sforge/errors.hpp"
#include "sforge/synthetic.hpp"

#include <doctest.h>

#include <cmath>

using namespace sforge;

namespace {

SyntheticSceneSpec small_spec() {
    SyntheticSceneSpec spec;
    spec.height = 24;
    spec.width = 24;
    spec.n_bands = 30;
    spec.n_samples = 6;
    spec.object_radius_px = 8;
    spec.noise_sd = 0.0;
    spec.seed = 99;
    return spec;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const auto n = static_cast<double>(a.size());
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

} // namespace

TEST_SUITE("synthetic") {

TEST_CASE("noiseless calibration inverts to the truth cube") {
    const SyntheticDataset ds = generate_synthetic_scene(small_spec());
    REQUIRE(ds.scenes.size() == 6);
    ReferenceFrames refs;
    refs.white = ds.white;
    refs.dark = ds.dark;
    for (const SyntheticScene& scene : ds.scenes) {
        const CalibrationResult cal = calibrate_reflectance(scene.raw, refs);
        CHECK(cal.invalid_count == 0);
        REQUIRE(cal.reflectance.size() == scene.truth.size());
        for (std::size_t i = 0; i < scene.truth.data.size(); ++i)
            CHECK(cal.reflectance.data[i] ==
                  doctest::Approx(scene.truth.data[i]).epsilon(1e-12));
    }
}

TEST_CASE("fixed seed reproduces bit-identical output") {
    const SyntheticDataset a = generate_synthetic_scene(small_spec());
    const SyntheticDataset b = generate_synthetic_scene(small_spec());
    REQUIRE(a.scenes.size() == b.scenes.size());
    CHECK(a.white.data == b.white.data);
    CHECK(a.dark.data == b.dark.data);
    for (std::size_t s = 0; s < a.scenes.size(); ++s) {
        CHECK(a.scenes[s].raw.data == b.scenes[s].raw.data);
        CHECK(a.scenes[s].truth.data == b.scenes[s].truth.data);
        CHECK(a.scenes[s].latent == b.scenes[s].latent);
        CHECK(a.scenes[s].object_mask == b.scenes[s].object_mask);
    }
    SyntheticSceneSpec other = small_spec();
    other.seed = 100;
    const SyntheticDataset c = generate_synthetic_scene(other);
    CHECK(c.scenes[0].raw.data != a.scenes[0].raw.data);
}

TEST_CASE("zero latent weights give identical object spectra") {
    SyntheticSceneSpec spec = small_spec();
    for (auto& p : spec.absorption_peaks) p.latent_weight = 0.0;
    const auto s1 = synthetic_object_spectrum(spec, spec.latent_min);
    const auto s2 = synthetic_object_spectrum(spec, spec.latent_max);
    REQUIRE(s1.size() == s2.size());
    for (std::size_t i = 0; i < s1.size(); ++i)
        CHECK(s1[i] == doctest::Approx(s2[i]).epsilon(1e-14));
}

TEST_CASE("latent correlates negatively with peak-center reflectance") {
    SyntheticSceneSpec spec = small_spec();
    spec.n_samples = 20;
    const SyntheticDataset ds = generate_synthetic_scene(spec);
    const int band = nearest_band_index(ds.scenes[0].truth,
                                        spec.absorption_peaks[0].center_nm);
    std::vector<double> latents, refl;
    for (const SyntheticScene& scene : ds.scenes) {
        latents.push_back(scene.latent);
        // mean object reflectance at the peak-center band
        double sum = 0;
        std::size_t count = 0;
        for (int y = 0; y < scene.truth.height; ++y)
            for (int x = 0; x < scene.truth.width; ++x)
                if (scene.object_mask[static_cast<std::size_t>(y) * spec.width + x]) {
                    sum += scene.truth.at(y, x, band);
                    ++count;
                }
        REQUIRE(count > 0);
        refl.push_back(sum / static_cast<double>(count));
    }
    const double r = pearson(latents, refl);
    CHECK(r < 0.0);
    CHECK(std::abs(r) > 0.9);
}

TEST_CASE("n_samples = 0 yields an empty scene list") {
    SyntheticSceneSpec spec = small_spec();
    spec.n_samples = 0;
    const SyntheticDataset ds = generate_synthetic_scene(spec);
    CHECK(ds.scenes.empty());
    CHECK(ds.white.size() > 0);
}

TEST_CASE("object mask is a centered disk of the requested radius") {
    const SyntheticSceneSpec spec = small_spec();
    const SyntheticDataset ds = generate_synthetic_scene(spec);
    const auto& mask = ds.scenes[0].object_mask;
    const double cy = (spec.height - 1) / 2.0, cx = (spec.width - 1) / 2.0;
    for (int y = 0; y < spec.height; ++y)
        for (int x = 0; x < spec.width; ++x) {
            const double d = std::hypot(y - cy, x - cx);
            const bool inside = d <= spec.object_radius_px;
            CHECK(mask[static_cast<std::size_t>(y) * spec.width + x] ==
                  (inside ? 1 : 0));
        }
}

TEST_CASE("spec invariants are enforced") {
    SyntheticSceneSpec spec = small_spec();
    spec.n_bands = 2;
    CHECK_THROWS_AS(spec.validate(), BadConfig);
    spec = small_spec();
    spec.noise_sd = -0.1;
    CHECK_THROWS_AS(spec.validate(), BadConfig);
    spec = small_spec();
    spec.absorption_peaks[0].center_nm = 5000.0;
    CHECK_THROWS_AS(spec.validate(), BadConfig);
}

} // TEST_SUITE
