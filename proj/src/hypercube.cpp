#include "sforge/hypercube.hpp"
#include "sforge/errors.hpp"
#include "sforge/csv.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace sforge {

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    if (n == 1) {
        v[0] = lo;
        return v;
    }
    for (int i = 0; i < n; ++i)
        v[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    return v;
}

void Hypercube::validate(double r_max) const {
    if (bands <= 0 || height <= 0 || width <= 0)
        throw MalformedHeader("cube dimensions must be positive");
    if (static_cast<int>(wavelengths_nm.size()) != bands)
        throw MalformedHeader("wavelength axis length != band count");
    for (int i = 1; i < bands; ++i)
        if (!(wavelengths_nm[i] > wavelengths_nm[i - 1]))
            throw MalformedHeader("wavelengths not strictly increasing");
    for (double v : data) {
        if (!std::isfinite(v)) throw OutOfRange("non-finite cube value");
        if (kind == CubeKind::reflectance && (v < 0.0 || v > r_max))
            throw OutOfRange("reflectance outside [0, r_max]");
    }
}

namespace {

std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

} // namespace

EnviHeader parse_envi_header(const std::string& text) {
    // Collapse the text into key = value entries; a braced value may
    // span several lines.
    EnviHeader h;
    bool have_samples = false, have_lines = false, have_bands = false;
    bool have_interleave = false, have_dtype = false;

    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto eq = line.find('=');
        if (eq == std::string::npos) continue; // e.g. the ENVI magic line
        std::string key = lowercase(trim(line.substr(0, eq)));
        std::string value = trim(line.substr(eq + 1));
        if (!value.empty() && value.front() == '{') {
            while (value.find('}') == std::string::npos) {
                std::string more;
                if (!std::getline(in, more))
                    throw MalformedHeader("unterminated brace list for key '" + key + "'");
                value += " " + trim(more);
            }
            value = trim(value.substr(1, value.find('}') - 1));
        }

        try {
            if (key == "samples") {
                h.samples = static_cast<int>(parse_long(value));
                have_samples = true;
            } else if (key == "lines") {
                h.lines = static_cast<int>(parse_long(value));
                have_lines = true;
            } else if (key == "bands") {
                h.bands = static_cast<int>(parse_long(value));
                have_bands = true;
            } else if (key == "interleave") {
                std::string v = lowercase(value);
                if (v != "bil") throw UnsupportedInterleave("interleave '" + value + "' not supported");
                h.interleave = Interleave::bil;
                have_interleave = true;
            } else if (key == "data type") {
                long code = parse_long(value);
                if (code == 4) h.data_type = DataType::float32;
                else if (code == 12) h.data_type = DataType::uint16;
                else throw MalformedHeader("data type code " + value + " not supported");
                have_dtype = true;
            } else if (key == "byte order") {
                long code = parse_long(value);
                if (code == 0) h.byte_order = ByteOrder::little;
                else if (code == 1) h.byte_order = ByteOrder::big;
                else throw MalformedHeader("byte order code " + value + " not supported");
            } else if (key == "wavelength") {
                for (const auto& cell : split(value, ','))
                    if (!trim(cell).empty()) h.wavelengths_nm.push_back(parse_double(cell));
            }
            // unrecognized keys ignored
        } catch (const ParseError& e) {
            throw MalformedHeader(std::string("bad value for '") + key + "': " + e.what());
        }
    }

    if (!have_samples || !have_lines || !have_bands || !have_interleave || !have_dtype)
        throw MalformedHeader("missing required key (samples, lines, bands, interleave, data type)");
    if (h.samples <= 0 || h.lines <= 0 || h.bands <= 0)
        throw MalformedHeader("samples, lines and bands must be positive");
    if (!h.wavelengths_nm.empty() &&
        static_cast<int>(h.wavelengths_nm.size()) != h.bands)
        throw MalformedHeader("wavelength list length != bands");
    return h;
}

std::string format_envi_header(const EnviHeader& h) {
    std::ostringstream out;
    out << "ENVI\n";
    out << "samples = " << h.samples << "\n";
    out << "lines = " << h.lines << "\n";
    out << "bands = " << h.bands << "\n";
    out << "interleave = bil\n";
    out << "data type = " << (h.data_type == DataType::float32 ? 4 : 12) << "\n";
    out << "byte order = " << (h.byte_order == ByteOrder::little ? 0 : 1) << "\n";
    if (!h.wavelengths_nm.empty()) {
        out << "wavelength = {";
        for (std::size_t i = 0; i < h.wavelengths_nm.size(); ++i) {
            if (i) out << ", ";
            out << fmt_g17(h.wavelengths_nm[i]);
        }
        out << "}\n";
    }
    return out.str();
}

namespace {

float load_f32(const std::uint8_t* p, ByteOrder order) {
    std::uint32_t u;
    if (order == ByteOrder::little)
        u = std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 |
            std::uint32_t(p[2]) << 16 | std::uint32_t(p[3]) << 24;
    else
        u = std::uint32_t(p[3]) | std::uint32_t(p[2]) << 8 |
            std::uint32_t(p[1]) << 16 | std::uint32_t(p[0]) << 24;
    return std::bit_cast<float>(u);
}

std::uint16_t load_u16(const std::uint8_t* p, ByteOrder order) {
    if (order == ByteOrder::little)
        return static_cast<std::uint16_t>(p[0] | p[1] << 8);
    return static_cast<std::uint16_t>(p[1] | p[0] << 8);
}

void store_f32(std::uint8_t* p, float v) {
    auto u = std::bit_cast<std::uint32_t>(v);
    p[0] = static_cast<std::uint8_t>(u);
    p[1] = static_cast<std::uint8_t>(u >> 8);
    p[2] = static_cast<std::uint8_t>(u >> 16);
    p[3] = static_cast<std::uint8_t>(u >> 24);
}

} // namespace

Hypercube read_bil_cube(const EnviHeader& h, const std::vector<std::uint8_t>& bytes) {
    if (h.samples <= 0 || h.lines <= 0 || h.bands <= 0)
        throw MalformedHeader("header dimensions must be positive");
    const std::size_t elem = EnviHeader::bytes_per_sample(h.data_type);
    if (bytes.size() != h.payload_bytes())
        throw TruncatedPayload("payload is " + std::to_string(bytes.size()) +
                               " bytes, header implies " + std::to_string(h.payload_bytes()));

    std::vector<double> wl = h.wavelengths_nm;
    if (wl.empty()) wl = linspace(400.0, 1000.0, h.bands); // assumed camera grid
    for (int i = 1; i < h.bands; ++i)
        if (!(wl[i] > wl[i - 1]))
            throw MalformedHeader("wavelengths not strictly increasing");

    Hypercube cube(h.lines, h.samples, h.bands, std::move(wl), CubeKind::raw_counts);
    for (int row = 0; row < h.lines; ++row) {
        for (int band = 0; band < h.bands; ++band) {
            const std::size_t line_off =
                (static_cast<std::size_t>(row) * h.bands + band) * h.samples;
            for (int col = 0; col < h.samples; ++col) {
                const std::uint8_t* p = bytes.data() + (line_off + col) * elem;
                double v = h.data_type == DataType::float32
                               ? static_cast<double>(load_f32(p, h.byte_order))
                               : static_cast<double>(load_u16(p, h.byte_order));
                cube.at(row, col, band) = v;
            }
        }
    }
    return cube;
}

std::pair<EnviHeader, std::vector<std::uint8_t>> write_bil_cube(const Hypercube& cube) {
    EnviHeader h;
    h.samples = cube.width;
    h.lines = cube.height;
    h.bands = cube.bands;
    h.interleave = Interleave::bil;
    h.data_type = DataType::float32;
    h.byte_order = ByteOrder::little;
    h.wavelengths_nm = cube.wavelengths_nm;

    std::vector<std::uint8_t> bytes(h.payload_bytes());
    for (int row = 0; row < cube.height; ++row) {
        for (int band = 0; band < cube.bands; ++band) {
            const std::size_t line_off =
                (static_cast<std::size_t>(row) * cube.bands + band) * cube.width;
            for (int col = 0; col < cube.width; ++col) {
                store_f32(bytes.data() + (line_off + col) * 4,
                          static_cast<float>(cube.at(row, col, band)));
            }
        }
    }
    return {std::move(h), std::move(bytes)};
}

void save_cube(const std::string& path_base, const Hypercube& cube) {
    auto [header, bytes] = write_bil_cube(cube);
    {
        std::ofstream out(path_base + ".hdr");
        if (!out) throw IoError("cannot write " + path_base + ".hdr");
        out << format_envi_header(header);
    }
    std::ofstream out(path_base + ".bil", std::ios::binary);
    if (!out) throw IoError("cannot write " + path_base + ".bil");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed: " + path_base + ".bil");
}

Hypercube load_cube(const std::string& path_base) {
    std::ifstream hin(path_base + ".hdr");
    if (!hin) throw IoError("cannot open " + path_base + ".hdr");
    std::stringstream htext;
    htext << hin.rdbuf();
    EnviHeader header = parse_envi_header(htext.str());

    std::ifstream bin(path_base + ".bil", std::ios::binary);
    if (!bin) throw IoError("cannot open " + path_base + ".bil");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(bin)),
                                    std::istreambuf_iterator<char>());
    return read_bil_cube(header, bytes);
}

int nearest_band_index(const Hypercube& cube, double target_nm) {
    if (cube.wavelengths_nm.empty())
        throw MalformedHeader("cube has no wavelength axis");
    const double lo = cube.wavelengths_nm.front() - 50.0;
    const double hi = cube.wavelengths_nm.back() + 50.0;
    if (target_nm < lo || target_nm > hi)
        throw OutOfRange("target " + fmt_g10(target_nm) + " nm outside [" +
                         fmt_g10(lo) + ", " + fmt_g10(hi) + "]");
    int best = 0;
    double best_d = std::abs(cube.wavelengths_nm[0] - target_nm);
    for (int i = 1; i < static_cast<int>(cube.wavelengths_nm.size()); ++i) {
        double d = std::abs(cube.wavelengths_nm[i] - target_nm);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

Hypercube extract_bands(const Hypercube& cube, const std::vector<int>& band_indices) {
    if (band_indices.empty()) throw OutOfRange("no band indices given");
    std::vector<double> wl;
    wl.reserve(band_indices.size());
    for (std::size_t i = 0; i < band_indices.size(); ++i) {
        int b = band_indices[i];
        if (b < 0 || b >= cube.bands)
            throw OutOfRange("band index " + std::to_string(b) + " out of range");
        if (i > 0 && band_indices[i] <= band_indices[i - 1])
            throw OutOfRange("band indices must be ascending and unique");
        wl.push_back(cube.wavelengths_nm[b]);
    }
    Hypercube out(cube.height, cube.width, static_cast<int>(band_indices.size()),
                  std::move(wl), cube.kind);
    for (int r = 0; r < cube.height; ++r)
        for (int c = 0; c < cube.width; ++c)
            for (std::size_t k = 0; k < band_indices.size(); ++k)
                out.at(r, c, static_cast<int>(k)) = cube.at(r, c, band_indices[k]);
    return out;
}

} // namespace sforge
