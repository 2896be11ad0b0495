#pragma once

#include "sforge/ga_select.hpp"
#include "sforge/preprocess.hpp"
#include "sforge/recon_net.hpp"
#include "sforge/synthetic.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace sforge {

// ---------------------------------------------------------------------------
// INI-style configuration: [section] headers, key = value lines, # or ;
// comments.  Keys are case-sensitive; whitespace around keys/values trimmed.
// ---------------------------------------------------------------------------

class IniFile {
public:
    static IniFile from_file(const std::string& path);
    static IniFile from_text(const std::string& text);

    bool has(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key,
                      double fallback) const;
    long get_int(const std::string& section, const std::string& key) const;
    long get_int(const std::string& section, const std::string& key,
                 long fallback) const;
    std::uint64_t get_seed(const std::string& section) const; // mandatory "seed" key

private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
};

struct SplitConfig {
    double cal_ratio = 0.6, val_ratio = 0.2, pred_ratio = 0.2;
    int max_lv = 10;
    std::uint64_t seed = 0;
};

struct EvaluateConfig {
    double psnr_peak = 1.0;
    double mrae_floor = 1e-4;
};

struct PipelineConfig {
    std::string data_dir = "data";
    std::string out_dir = "out";

    SyntheticSceneSpec synth;
    double segmentation_hi_nm = 602.0;
    double segmentation_lo_nm = 452.0;
    double calibration_epsilon = 1e-6;
    double calibration_r_max = 2.0;
    PreprocessSpec preprocess;
    SplitConfig split;
    GaConfig ga;
    double gamma = 1.4;
    NetworkConfig network;
    TrainConfig train;
    EvaluateConfig evaluate;

    // Seeds are mandatory in the file; --seed on the CLI rederives all of
    // them from one master value.
    static PipelineConfig from_file(const std::string& path);
    void override_master_seed(std::uint64_t seed);
};

} // namespace sforge
