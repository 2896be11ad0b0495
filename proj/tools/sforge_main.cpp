// sforge — spectral forge command-line interface.
//
// Usage: sforge <subcommand> --config <file> [--out <dir>] [--seed <n>]
// Exit codes: 0 success, 2 configuration error, 3 stage failure.

#include "sforge/csv.hpp"
#include "sforge/errors.hpp"
#include "sforge/pipeline.hpp"
#include "sforge/plot.hpp"
#include "sforge/segmentation.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace {

using namespace sforge;

std::string join(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

void echo_file(const std::string& path) {
    std::ifstream in(path);
    std::cout << in.rdbuf();
}

// Training trace and per-sample ground-truth vs reconstructed
// spectra overlays for the minimum / closest-to-mean / maximum reference
// samples.
void cmd_plot(const PipelineConfig& cfg) {
    const std::string plots = join(cfg.out_dir, "plots");
    std::filesystem::create_directories(plots);

    {
        const CsvTable trace = read_csv(join(cfg.out_dir, "models/train_trace.csv"));
        PlotSeries s;
        s.label = "TRAIN MRAE";
        for (const auto& row : trace.rows) {
            s.x.push_back(parse_double(row[0]));
            s.y.push_back(parse_double(row[1]));
        }
        PlotOptions opt;
        opt.title = "TRAINING MRAE";
        opt.x_label = "EPOCH";
        opt.y_label = "MRAE";
        render_line_plot(join(plots, "train_trace.png"), {s}, opt);
    }

    const auto [gt_samples, full_wl] =
        read_spectra_csv(join(cfg.out_dir, "spectra/spectra_full.csv"));
    const auto [rc_samples, sel_wl] =
        read_spectra_csv(join(cfg.out_dir, "spectra/spectra_recon.csv"));
    const std::vector<int> bands =
        read_selected_bands_csv(join(cfg.out_dir, "ga/selected_bands.csv"));

    std::map<std::string, double> latents;
    for (const auto& row : read_csv(join(cfg.data_dir, "latents.csv")).rows)
        latents[row[0]] = parse_double(row[1]);

    double mean = 0;
    for (const auto& s : gt_samples) mean += latents.at(s.sample_id);
    mean /= static_cast<double>(gt_samples.size());
    std::size_t i_min = 0, i_max = 0, i_mean = 0;
    for (std::size_t i = 0; i < gt_samples.size(); ++i) {
        const double v = latents.at(gt_samples[i].sample_id);
        if (v < latents.at(gt_samples[i_min].sample_id)) i_min = i;
        if (v > latents.at(gt_samples[i_max].sample_id)) i_max = i;
        if (std::abs(v - mean) <
            std::abs(latents.at(gt_samples[i_mean].sample_id) - mean))
            i_mean = i;
    }

    const std::pair<const char*, std::size_t> picks[] = {
        {"spectra_min.png", i_min}, {"spectra_mean.png", i_mean},
        {"spectra_max.png", i_max}};
    for (const auto& [file, idx] : picks) {
        const SampleSpectrum& gt = gt_samples[idx];
        const SampleSpectrum* rc = nullptr;
        for (const auto& s : rc_samples)
            if (s.sample_id == gt.sample_id) rc = &s;
        if (!rc) throw ParseError("no reconstructed spectrum for " + gt.sample_id);

        PlotSeries gs, rs;
        gs.label = "GROUND TRUTH";
        rs.label = "RECONSTRUCTED";
        for (std::size_t j = 0; j < bands.size(); ++j) {
            gs.x.push_back(sel_wl[j]);
            gs.y.push_back(gt.spectrum[static_cast<std::size_t>(bands[j])]);
            rs.x.push_back(sel_wl[j]);
            rs.y.push_back(rc->spectrum[j]);
        }
        PlotOptions opt;
        opt.title = "SAMPLE " + gt.sample_id + " REF " +
                    fmt_f4(latents.at(gt.sample_id));
        opt.x_label = "WAVELENGTH (NM)";
        opt.y_label = "REFLECTANCE";
        render_line_plot(join(plots, file), {gs, rs}, opt);
    }
    (void)full_wl;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sforge: hyperspectral calibration, chemometrics, band selection, "
                 "and RGB-to-spectral reconstruction toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    std::uint64_t master_seed = 0;
    bool seed_given = false;

    const char* const names[] = {"synth",   "calibrate", "mask",        "extract",
                                 "select",  "render",    "train",       "reconstruct",
                                 "evaluate", "report",   "pipeline",    "plot"};
    const char* const descs[] = {
        "generate the synthetic dataset",
        "reflectance calibration of every raw cube",
        "band-difference Otsu segmentation masks",
        "ROI mean spectra, replicate averaging, and the sample split",
        "GA wavelength selection on the calibration block",
        "selected-band cubes and masked RGB renderings",
        "train the RGB-to-spectral reconstruction network",
        "reconstruct hypercubes from the rendered RGB images",
        "full-spectrum and selected-band PLSR tables plus reconstruction metrics",
        "assemble report.csv / report.txt from stage outputs",
        "run every stage in order and write the run report",
        "render training-trace and spectra-overlay plots"};
    for (std::size_t i = 0; i < std::size(names); ++i) {
        CLI::App* sub = app.add_subcommand(names[i], descs[i]);
        sub->add_option("--config", config_path, "configuration file (INI-style)")
            ->required();
        sub->add_option("--out", out_override, "override [paths] out_dir");
        sub->add_option("--seed", master_seed,
                        "master seed: rederives synthetic/split/GA/train seeds");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    seed_given = app.get_subcommands().front()->count("--seed") > 0;

    sforge::PipelineConfig cfg;
    try {
        cfg = sforge::PipelineConfig::from_file(config_path);
        if (!out_override.empty()) cfg.out_dir = out_override;
        if (seed_given) cfg.override_master_seed(master_seed);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "sforge: config error: %s\n", e.what());
        return 2;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        if (cmd == "synth") {
            sforge::stage_synth(cfg);
        } else if (cmd == "calibrate") {
            sforge::stage_calibrate(cfg);
        } else if (cmd == "mask") {
            sforge::stage_mask(cfg);
        } else if (cmd == "extract") {
            sforge::stage_extract(cfg);
        } else if (cmd == "select") {
            sforge::stage_select(cfg);
        } else if (cmd == "render") {
            sforge::stage_render(cfg);
        } else if (cmd == "train") {
            sforge::stage_train(cfg);
        } else if (cmd == "reconstruct") {
            sforge::stage_reconstruct(cfg);
        } else if (cmd == "evaluate") {
            // The full-spectrum PLSR table is refit here as well so that the
            // independent-subcommand sequence ending in `report` always finds
            // all three tables; both fits are deterministic from stage files.
            sforge::stage_plsr_full(cfg);
            sforge::stage_evaluate(cfg);
        } else if (cmd == "report") {
            sforge::stage_report(cfg);
            echo_file(join(cfg.out_dir, "report.txt"));
        } else if (cmd == "pipeline") {
            sforge::run_pipeline(cfg);
            echo_file(join(cfg.out_dir, "report.txt"));
        } else if (cmd == "plot") {
            cmd_plot(cfg);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "sforge: %s failed: %s\n", cmd.c_str(), e.what());
        return 3;
    }
    return 0;
}
