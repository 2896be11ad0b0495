#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace sforge {

// ---------------------------------------------------------------------------
// Genetic-algorithm wavelength selection with PLSR-RMSECV fitness.  The
// fitness only ever sees the calibration block, so validation/prediction
// samples cannot leak into the selection.
// ---------------------------------------------------------------------------

struct GaConfig {
    int population = 50;
    int generations = 100;
    double crossover_rate = 0.8;
    double mutation_rate = -1.0; // < 0 means 1/B, resolved at run time
    int tournament_size = 3;
    int elitism = 2;
    int target_k = 15;          // 0 switches to free-size mode
    double size_penalty = 0.01; // per selected band, free-size mode only
    int inner_max_lv = 10;
    std::uint64_t seed = 0;

    void validate(int bands) const;
    double resolved_mutation_rate(int bands) const;
};

struct Chromosome {
    std::vector<std::uint8_t> genes; // length B
    double fitness = std::numeric_limits<double>::infinity();

    int gene_count() const;
};

struct GaResult {
    std::vector<int> selected_bands;          // ascending
    std::vector<double> selected_wavelengths; // nm, aligned with selected_bands
    Chromosome best;
    std::vector<double> trace; // best-so-far fitness, length generations + 1
    GaConfig config;
};

// RMSECV of a PLSR model restricted to the chromosome's bands: minimum over
// 1..min(inner_max_lv, k, n-2) latent variables, plus size_penalty * k in
// free-size mode.  RankDeficient collapses to +inf rather than throwing.
double ga_fitness(const std::vector<std::uint8_t>& genes, const Eigen::MatrixXd& X,
                  const Eigen::VectorXd& y, const GaConfig& config);

GaResult ga_select(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                   const std::vector<double>& wavelengths_nm, const GaConfig& config);

// CSV of (band_index, wavelength_nm) rows for the selected set.
void write_selected_bands_csv(const std::string& path, const GaResult& result);
std::vector<int> read_selected_bands_csv(const std::string& path,
                                         std::vector<double>* wavelengths_nm = nullptr);

// JSON run record: config, selected set, fitness trace.
void write_ga_run_record(const std::string& path, const GaResult& result);

} // namespace sforge
