#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace sforge {

// ---------------------------------------------------------------------------
// Spectral pre-treatments: SNV, MSC, Savitzky-Golay first derivative.
// Matrices are samples x bands.
// ---------------------------------------------------------------------------

enum class PreprocessMethod { raw, msc, snv, sg1 };

PreprocessMethod parse_preprocess_method(const std::string& name);
std::string preprocess_method_name(PreprocessMethod m);

struct PreprocessSpec {
    PreprocessMethod method = PreprocessMethod::raw;
    int sg_window = 11;   // odd, >= 5
    int sg_polyorder = 2; // >= 1, < sg_window

    void validate() const;
};

// Fitted state: MSC needs the calibration-set mean spectrum frozen at fit
// time so validation/prediction rows are corrected against the same
// reference.  SNV/SG carry no state but still record the band axis so the
// derivative's dropped edges stay consistent.
struct PreprocessModel {
    PreprocessSpec spec;
    Eigen::VectorXd msc_reference; // empty unless method == msc
    std::vector<double> wavelengths_nm;     // input axis
    std::vector<double> out_wavelengths_nm; // axis after transform (SG drops edges)
};

// Standard normal variate of one spectrum: (x - mean) / sd with the n-1
// denominator.  Throws ZeroVariance on a constant vector.
Eigen::VectorXd snv(const Eigen::VectorXd& spectrum);

// Multiplicative scatter correction: per row fit x ~ a + b*reference by OLS
// and return (x - a) / b.  Throws DegenerateFit when |b| < 1e-12.
Eigen::MatrixXd msc(const Eigen::MatrixXd& X, const Eigen::VectorXd& reference);

// First-derivative Savitzky-Golay coefficients for the window center
// (per-band-index units); they sum to zero.
Eigen::VectorXd sg_first_derivative_coeffs(int window, int polyorder);

// Apply the first-derivative filter row-wise; incomplete edge windows are
// dropped, so the result has B - window + 1 columns.
Eigen::MatrixXd sg_first_derivative(const Eigen::MatrixXd& X, int window, int polyorder);

// Fit the (possibly stateful) transform on the calibration block, then apply
// the same frozen transform to any other block.
PreprocessModel fit_preprocess(const PreprocessSpec& spec, const Eigen::MatrixXd& X_cal,
                               const std::vector<double>& wavelengths_nm);
Eigen::MatrixXd apply_preprocess(const PreprocessModel& model, const Eigen::MatrixXd& X);

} // namespace sforge
