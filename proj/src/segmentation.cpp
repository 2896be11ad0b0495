#include "sforge/segmentation.hpp"
#include "sforge/csv.hpp"
#include "sforge/errors.hpp"
#include "sforge/png_io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

namespace sforge {

int otsu_bin_threshold(const std::vector<double>& values,
                       const std::vector<std::uint8_t>& include,
                       double vmin, double vmax) {
    if (!(vmax > vmin)) throw DegenerateImage("image has no intensity spread");
    constexpr int kBins = 256;
    std::array<std::size_t, kBins> hist{};
    const double scale = kBins / (vmax - vmin);
    std::size_t total = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!include.empty() && !include[i]) continue;
        int bin = static_cast<int>((values[i] - vmin) * scale);
        bin = std::clamp(bin, 0, kBins - 1);
        ++hist[bin];
        ++total;
    }
    if (total == 0) throw EmptyRoi("no pixels available for thresholding");

    double sum_all = 0.0;
    for (int b = 0; b < kBins; ++b) sum_all += static_cast<double>(b) * hist[b];

    double best_score = -1.0;
    int best_bin = 0;
    double w0 = 0.0, sum0 = 0.0;
    for (int t = 0; t < kBins - 1; ++t) {
        w0 += static_cast<double>(hist[t]);
        sum0 += static_cast<double>(t) * hist[t];
        const double w1 = static_cast<double>(total) - w0;
        if (w0 == 0.0 || w1 == 0.0) continue;
        const double mu0 = sum0 / w0;
        const double mu1 = (sum_all - sum0) / w1;
        const double score = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
        if (score > best_score) {
            best_score = score;
            best_bin = t;
        }
    }
    if (best_score < 0.0) throw DegenerateImage("all pixels fall in one histogram bin");
    return best_bin;
}

BinaryMask band_difference_mask(const Hypercube& cube,
                                const std::vector<std::uint8_t>& valid,
                                double hi_nm, double lo_nm) {
    if (cube.kind != CubeKind::reflectance)
        throw BadConfig("band_difference_mask requires a reflectance cube");
    if (!valid.empty() && valid.size() != cube.size())
        throw ShapeMismatch("validity flags not element-aligned with cube");
    const int hi = nearest_band_index(cube, hi_nm);
    const int lo = nearest_band_index(cube, lo_nm);

    const std::size_t n = cube.pixel_count();
    std::vector<double> diff(n);
    std::vector<std::uint8_t> usable(n, 1);
    double vmin = 0.0, vmax = 0.0;
    bool seen = false;
    for (int r = 0; r < cube.height; ++r) {
        for (int c = 0; c < cube.width; ++c) {
            const std::size_t p = static_cast<std::size_t>(r) * cube.width + c;
            if (!valid.empty()) {
                const std::size_t base = p * cube.bands;
                if (!valid[base + hi] || !valid[base + lo]) {
                    usable[p] = 0;
                    diff[p] = 0.0;
                    continue;
                }
            }
            diff[p] = cube.at(r, c, hi) - cube.at(r, c, lo);
            if (!seen) {
                vmin = vmax = diff[p];
                seen = true;
            } else {
                vmin = std::min(vmin, diff[p]);
                vmax = std::max(vmax, diff[p]);
            }
        }
    }
    if (!seen) throw EmptyRoi("all pixels invalid");

    const int t = otsu_bin_threshold(diff, usable, vmin, vmax);
    const double scale = 256.0 / (vmax - vmin);

    BinaryMask mask;
    mask.height = cube.height;
    mask.width = cube.width;
    mask.data.assign(n, 0);
    for (std::size_t p = 0; p < n; ++p) {
        if (!usable[p]) continue;
        int bin = std::clamp(static_cast<int>((diff[p] - vmin) * scale), 0, 255);
        if (bin > t) {
            mask.data[p] = 1;
            ++mask.true_count;
        }
    }
    if (mask.true_count == 0) throw EmptyRoi("threshold produced an empty mask");
    return mask;
}

BinaryMask largest_component(const BinaryMask& mask) {
    BinaryMask out;
    out.height = mask.height;
    out.width = mask.width;
    out.data.assign(mask.data.size(), 0);

    std::vector<std::int32_t> label(mask.data.size(), -1);
    std::vector<std::size_t> stack;
    std::int32_t next = 0;
    std::size_t best_size = 0;
    std::int32_t best_label = -1;

    for (std::size_t start = 0; start < mask.data.size(); ++start) {
        if (!mask.data[start] || label[start] >= 0) continue;
        std::size_t count = 0;
        stack.push_back(start);
        label[start] = next;
        while (!stack.empty()) {
            std::size_t p = stack.back();
            stack.pop_back();
            ++count;
            const int r = static_cast<int>(p) / mask.width;
            const int c = static_cast<int>(p) % mask.width;
            const int dr[4] = {-1, 1, 0, 0};
            const int dc[4] = {0, 0, -1, 1};
            for (int k = 0; k < 4; ++k) {
                const int nr = r + dr[k], nc = c + dc[k];
                if (nr < 0 || nr >= mask.height || nc < 0 || nc >= mask.width) continue;
                const std::size_t q = static_cast<std::size_t>(nr) * mask.width + nc;
                if (mask.data[q] && label[q] < 0) {
                    label[q] = next;
                    stack.push_back(q);
                }
            }
        }
        if (count > best_size) {
            best_size = count;
            best_label = next;
        }
        ++next;
    }
    if (best_label < 0) throw EmptyRoi("mask has no foreground");
    for (std::size_t p = 0; p < mask.data.size(); ++p)
        if (label[p] == best_label) {
            out.data[p] = 1;
            ++out.true_count;
        }
    return out;
}

std::vector<double> mean_roi_spectrum(const Hypercube& cube, const BinaryMask& mask,
                                      const std::vector<std::uint8_t>& valid) {
    if (mask.height != cube.height || mask.width != cube.width)
        throw ShapeMismatch("mask shape does not match cube");
    if (!valid.empty() && valid.size() != cube.size())
        throw ShapeMismatch("validity flags not element-aligned with cube");
    if (mask.true_count == 0) throw EmptyRoi("mask is empty");

    std::vector<double> sum(cube.bands, 0.0);
    std::vector<std::size_t> count(cube.bands, 0);
    for (int r = 0; r < cube.height; ++r) {
        for (int c = 0; c < cube.width; ++c) {
            const std::size_t p = static_cast<std::size_t>(r) * cube.width + c;
            if (!mask.data[p]) continue;
            const std::size_t base = p * cube.bands;
            for (int b = 0; b < cube.bands; ++b) {
                if (!valid.empty() && !valid[base + b]) continue;
                sum[b] += cube.data[base + b];
                ++count[b];
            }
        }
    }
    std::vector<double> mean(cube.bands);
    for (int b = 0; b < cube.bands; ++b) {
        if (count[b] == 0)
            throw EmptyRoi("band " + std::to_string(b) + " has no valid ROI pixels");
        mean[b] = sum[b] / static_cast<double>(count[b]);
    }
    return mean;
}

std::vector<SampleSpectrum> average_replicates(
    const std::vector<std::pair<std::string, std::vector<double>>>& spectra) {
    std::map<std::string, SampleSpectrum> acc;
    std::size_t len = spectra.empty() ? 0 : spectra.front().second.size();
    for (const auto& [id, vec] : spectra) {
        if (vec.size() != len)
            throw ShapeMismatch("replicate spectra lengths differ");
        auto it = acc.find(id);
        if (it == acc.end()) {
            SampleSpectrum s;
            s.sample_id = id;
            s.spectrum = vec;
            s.n_replicates = 1;
            acc.emplace(id, std::move(s));
        } else {
            for (std::size_t i = 0; i < len; ++i) it->second.spectrum[i] += vec[i];
            ++it->second.n_replicates;
        }
    }
    std::vector<SampleSpectrum> out;
    out.reserve(acc.size());
    for (auto& [id, s] : acc) {
        for (double& v : s.spectrum) v /= s.n_replicates;
        out.push_back(std::move(s));
    }
    return out; // std::map iteration is already sorted by sample_id
}

void write_mask_png(const std::string& path, const BinaryMask& mask) {
    PngImage img;
    img.width = mask.width;
    img.height = mask.height;
    img.channels = 1;
    img.pixels.resize(mask.data.size());
    for (std::size_t i = 0; i < mask.data.size(); ++i)
        img.pixels[i] = mask.data[i] ? 255 : 0;
    write_png(path, img);
}

BinaryMask read_mask_png(const std::string& path) {
    PngImage img = read_png(path);
    if (img.channels != 1) throw ParseError(path + ": mask PNG must be grayscale");
    BinaryMask mask;
    mask.height = img.height;
    mask.width = img.width;
    mask.data.resize(img.pixels.size());
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        mask.data[i] = img.pixels[i] >= 128 ? 1 : 0;
        if (mask.data[i]) ++mask.true_count;
    }
    return mask;
}

void write_spectra_csv(const std::string& path,
                       const std::vector<SampleSpectrum>& samples,
                       const std::vector<double>& wavelengths_nm) {
    CsvTable t;
    t.header.push_back("sample_id");
    for (double wl : wavelengths_nm) t.header.push_back("wl_" + fmt_g10(wl));
    for (const auto& s : samples) {
        if (s.spectrum.size() != wavelengths_nm.size())
            throw ShapeMismatch("spectrum length != wavelength axis");
        std::vector<std::string> row;
        row.push_back(s.sample_id);
        for (double v : s.spectrum) row.push_back(fmt_g17(v));
        t.rows.push_back(std::move(row));
    }
    write_csv(path, t);
}

std::pair<std::vector<SampleSpectrum>, std::vector<double>>
read_spectra_csv(const std::string& path) {
    CsvTable t = read_csv(path);
    if (t.header.empty() || t.header[0] != "sample_id")
        throw ParseError(path + ": expected sample_id header");
    std::vector<double> wl;
    for (std::size_t i = 1; i < t.header.size(); ++i) {
        if (t.header[i].rfind("wl_", 0) != 0)
            throw ParseError(path + ": expected wl_<nm> column, got " + t.header[i]);
        wl.push_back(parse_double(t.header[i].substr(3)));
    }
    std::vector<SampleSpectrum> samples;
    for (const auto& row : t.rows) {
        SampleSpectrum s;
        s.sample_id = row[0];
        for (std::size_t i = 1; i < row.size(); ++i)
            s.spectrum.push_back(parse_double(row[i]));
        samples.push_back(std::move(s));
    }
    return {std::move(samples), std::move(wl)};
}

} // namespace sforge
