#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace sforge {

class Rng;

// ---------------------------------------------------------------------------
// Single-response PLSR via NIPALS, LOOCV latent-variable selection, random
// data splitting and regression reporting.
// ---------------------------------------------------------------------------

struct PlsrModel {
    Eigen::VectorXd x_mean;  // length B
    double y_mean = 0.0;
    Eigen::MatrixXd weights;    // B x A, unit-norm columns
    Eigen::MatrixXd x_loadings; // B x A
    Eigen::VectorXd y_loadings; // length A
    Eigen::VectorXd beta;       // length B
    int n_lv = 0;
};

struct SplitIndices {
    std::vector<int> calibration;
    std::vector<int> validation;
    std::vector<int> prediction;
    std::uint64_t seed = 0;
};

struct RegressionReport {
    double r2 = 0.0;
    double rmse = 0.0;
    int n = 0;
};

// Shuffle 0..n-1 with the seeded generator, then partition by
// largest-remainder rounding of the ratios.
SplitIndices random_split(int n, double cal_ratio, double val_ratio, double pred_ratio,
                          std::uint64_t seed);

// NIPALS fit with X/y centering.  Throws RankDeficient when a component's
// score norm collapses below 1e-14.
PlsrModel plsr_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int n_lv);

Eigen::VectorXd plsr_predict(const PlsrModel& model, const Eigen::MatrixXd& X);

struct LvSelection {
    int best_lv = 0;
    std::vector<double> rmsecv; // index a-1 holds RMSECV for a latent variables
};

// Leave-one-out RMSECV for 1..max_lv components; best_lv is the argmin with
// ties going to the smaller count.  A fold that throws RankDeficient marks
// that component count +inf.
LvSelection select_lv_loocv(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int max_lv);

RegressionReport regression_report(const Eigen::VectorXd& y_true,
                                   const Eigen::VectorXd& y_pred);

// Sample sd (n-1) of the evaluation-set reference values over RMSEP.
double rpd(const Eigen::VectorXd& y_true_eval, double rmsep);

// Versioned CSV-of-matrices serialization, magic "PLSR1".
void save_plsr_model(const std::string& path, const PlsrModel& model);
PlsrModel load_plsr_model(const std::string& path);

} // namespace sforge
