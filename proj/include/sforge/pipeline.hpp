#pragma once

#include "sforge/config.hpp"
#include "sforge/plsr.hpp"

#include <string>
#include <utility>
#include <vector>

namespace sforge {

// ---------------------------------------------------------------------------
// End-to-end workflow stages.  Every stage reads only prior-stage files and
// writes its own outputs under the configured directories, so subcommands can
// rerun any stage independently and a full rerun is byte-identical (wall-clock
// timings live in a separate timings.csv).
// ---------------------------------------------------------------------------

struct PlsrTableRow {
    std::string table; // full_spectrum | gt_selected | recon_selected
    int lv = 0;
    double r2c = 0, rmsec = 0;
    double r2v = 0, rmsev = 0;
    double r2p = 0, rmsep = 0;
    double rpd = 0;
};

struct ReconMetricsRow {
    std::string split; // calibration | validation | prediction
    double mrae = 0, rmse = 0, psnr = 0;
    std::size_t n_elements = 0;
};

struct RunReport {
    std::vector<PlsrTableRow> plsr_tables;
    std::vector<ReconMetricsRow> recon_metrics;
    std::vector<int> selected_bands;
    std::vector<double> selected_wavelengths;
    std::vector<std::pair<std::string, double>> timings_s;
};

void stage_synth(const PipelineConfig& cfg);
void stage_calibrate(const PipelineConfig& cfg);
void stage_mask(const PipelineConfig& cfg);
void stage_extract(const PipelineConfig& cfg); // spectra + replicate averaging + split
void stage_plsr_full(const PipelineConfig& cfg);
void stage_select(const PipelineConfig& cfg); // GA on the calibration block
void stage_render(const PipelineConfig& cfg); // selected-band cubes + masked RGB
void stage_train(const PipelineConfig& cfg);
void stage_reconstruct(const PipelineConfig& cfg);
void stage_evaluate(const PipelineConfig& cfg); // recon metrics + selected-spectra PLSR
RunReport stage_report(const PipelineConfig& cfg);

// All stages in order, with per-stage wall-clock timings recorded.
RunReport run_pipeline(const PipelineConfig& cfg);

// Shared helpers (used by the CLI and tests).
std::string sample_basename(int index);
std::vector<std::string> read_manifest_ids(const std::string& data_dir);
PlsrTableRow fit_plsr_table(const std::string& name, const Eigen::MatrixXd& X,
                            const Eigen::VectorXd& y, const SplitIndices& split,
                            int max_lv_cap, PlsrModel* fitted = nullptr);

} // namespace sforge
