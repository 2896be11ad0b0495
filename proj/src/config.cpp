#include "sforge/config.hpp"
#include "sforge/csv.hpp"
#include "sforge/errors.hpp"

#include <fstream>
#include <sstream>

namespace sforge {

IniFile IniFile::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw BadConfig("cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_text(buf.str());
}

IniFile IniFile::from_text(const std::string& text) {
    IniFile ini;
    std::istringstream in(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t comment = line.find_first_of("#;");
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw BadConfig("config line " + std::to_string(line_no) +
                                ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw BadConfig("config line " + std::to_string(line_no) +
                                ": empty section name");
            ini.sections_[section];
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw BadConfig("config line " + std::to_string(line_no) +
                            ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw BadConfig("config line " + std::to_string(line_no) + ": empty key");
        ini.sections_[section][key] = value;
    }
    return ini;
}

bool IniFile::has(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

std::string IniFile::get_string(const std::string& section,
                                const std::string& key) const {
    const auto s = sections_.find(section);
    if (s == sections_.end() || !s->second.count(key))
        throw BadConfig("missing config key [" + section + "] " + key);
    return s->second.at(key);
}

std::string IniFile::get_string(const std::string& section, const std::string& key,
                                const std::string& fallback) const {
    return has(section, key) ? get_string(section, key) : fallback;
}

double IniFile::get_double(const std::string& section, const std::string& key) const {
    try {
        return parse_double(get_string(section, key));
    } catch (const ParseError&) {
        throw BadConfig("config key [" + section + "] " + key + " is not a number");
    }
}

double IniFile::get_double(const std::string& section, const std::string& key,
                           double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
}

long IniFile::get_int(const std::string& section, const std::string& key) const {
    try {
        return parse_long(get_string(section, key));
    } catch (const ParseError&) {
        throw BadConfig("config key [" + section + "] " + key + " is not an integer");
    }
}

long IniFile::get_int(const std::string& section, const std::string& key,
                      long fallback) const {
    return has(section, key) ? get_int(section, key) : fallback;
}

std::uint64_t IniFile::get_seed(const std::string& section) const {
    if (!has(section, "seed"))
        throw BadConfig("seed is mandatory: missing [" + section + "] seed");
    const long v = get_int(section, "seed");
    if (v < 0) throw BadConfig("[" + section + "] seed must be nonnegative");
    return static_cast<std::uint64_t>(v);
}

PipelineConfig PipelineConfig::from_file(const std::string& path) {
    const IniFile ini = IniFile::from_file(path);
    PipelineConfig cfg;

    cfg.data_dir = ini.get_string("paths", "data_dir", cfg.data_dir);
    cfg.out_dir = ini.get_string("paths", "out_dir", cfg.out_dir);

    auto& sy = cfg.synth;
    sy.height = static_cast<int>(ini.get_int("synthetic", "height", sy.height));
    sy.width = static_cast<int>(ini.get_int("synthetic", "width", sy.width));
    sy.n_bands = static_cast<int>(ini.get_int("synthetic", "n_bands", sy.n_bands));
    sy.wavelength_min_nm =
        ini.get_double("synthetic", "wavelength_min_nm", sy.wavelength_min_nm);
    sy.wavelength_max_nm =
        ini.get_double("synthetic", "wavelength_max_nm", sy.wavelength_max_nm);
    sy.n_samples = static_cast<int>(ini.get_int("synthetic", "n_samples", sy.n_samples));
    sy.object_radius_px =
        static_cast<int>(ini.get_int("synthetic", "object_radius_px", sy.object_radius_px));
    sy.latent_min = ini.get_double("synthetic", "latent_min", sy.latent_min);
    sy.latent_max = ini.get_double("synthetic", "latent_max", sy.latent_max);
    sy.noise_sd = ini.get_double("synthetic", "noise_sd", sy.noise_sd);
    sy.seed = ini.get_seed("synthetic");

    cfg.segmentation_hi_nm = ini.get_double("segmentation", "hi_nm", 602.0);
    cfg.segmentation_lo_nm = ini.get_double("segmentation", "lo_nm", 452.0);
    cfg.calibration_epsilon = ini.get_double("calibration", "epsilon", 1e-6);
    cfg.calibration_r_max = ini.get_double("calibration", "r_max", 2.0);

    cfg.preprocess.method =
        parse_preprocess_method(ini.get_string("preprocess", "method", "raw"));
    cfg.preprocess.sg_window =
        static_cast<int>(ini.get_int("preprocess", "sg_window", 11));
    cfg.preprocess.sg_polyorder =
        static_cast<int>(ini.get_int("preprocess", "sg_polyorder", 2));

    cfg.split.cal_ratio = ini.get_double("split", "cal_ratio", 0.6);
    cfg.split.val_ratio = ini.get_double("split", "val_ratio", 0.2);
    cfg.split.pred_ratio = ini.get_double("split", "pred_ratio", 0.2);
    cfg.split.max_lv = static_cast<int>(ini.get_int("split", "max_lv", 10));
    cfg.split.seed = ini.get_seed("split");

    auto& ga = cfg.ga;
    ga.population = static_cast<int>(ini.get_int("ga", "population", ga.population));
    ga.generations = static_cast<int>(ini.get_int("ga", "generations", ga.generations));
    ga.crossover_rate = ini.get_double("ga", "crossover_rate", ga.crossover_rate);
    ga.mutation_rate = ini.get_double("ga", "mutation_rate", ga.mutation_rate);
    ga.tournament_size =
        static_cast<int>(ini.get_int("ga", "tournament_size", ga.tournament_size));
    ga.elitism = static_cast<int>(ini.get_int("ga", "elitism", ga.elitism));
    ga.target_k = static_cast<int>(ini.get_int("ga", "target_k", ga.target_k));
    ga.size_penalty = ini.get_double("ga", "size_penalty", ga.size_penalty);
    ga.inner_max_lv = static_cast<int>(ini.get_int("ga", "inner_max_lv", ga.inner_max_lv));
    ga.seed = ini.get_seed("ga");

    cfg.gamma = ini.get_double("color", "gamma", 1.4);

    cfg.network.n_dense = static_cast<int>(ini.get_int("network", "n_dense", 3));
    cfg.network.growth = static_cast<int>(ini.get_int("network", "growth", 8));
    // out_bands follows the GA selection at run time.

    auto& tr = cfg.train;
    tr.epochs = static_cast<int>(ini.get_int("train", "epochs", tr.epochs));
    tr.iters_per_epoch =
        static_cast<int>(ini.get_int("train", "iters_per_epoch", tr.iters_per_epoch));
    tr.batch = static_cast<int>(ini.get_int("train", "batch", tr.batch));
    tr.patch = static_cast<int>(ini.get_int("train", "patch", tr.patch));
    tr.stride = static_cast<int>(ini.get_int("train", "stride", tr.stride));
    tr.lr = ini.get_double("train", "lr", tr.lr);
    tr.lr_decay = ini.get_double("train", "lr_decay", tr.lr_decay);
    tr.beta1 = ini.get_double("train", "beta1", tr.beta1);
    tr.beta2 = ini.get_double("train", "beta2", tr.beta2);
    tr.eps = ini.get_double("train", "eps", tr.eps);
    tr.weight_decay = ini.get_double("train", "weight_decay", tr.weight_decay);
    tr.mrae_floor = ini.get_double("train", "mrae_floor", tr.mrae_floor);
    tr.seed = ini.get_seed("train");

    cfg.evaluate.psnr_peak = ini.get_double("evaluate", "psnr_peak", 1.0);
    cfg.evaluate.mrae_floor = ini.get_double("evaluate", "mrae_floor", 1e-4);

    cfg.synth.validate();
    cfg.preprocess.validate();
    cfg.train.validate();
    return cfg;
}

void PipelineConfig::override_master_seed(std::uint64_t seed) {
    synth.seed = seed;
    split.seed = seed + 1;
    ga.seed = seed + 2;
    train.seed = seed + 3;
}

} // namespace sforge
