#include "sforge/preprocess.hpp"
#include "sforge/errors.hpp"

#include <cmath>

namespace sforge {

PreprocessMethod parse_preprocess_method(const std::string& name) {
    if (name == "raw") return PreprocessMethod::raw;
    if (name == "msc") return PreprocessMethod::msc;
    if (name == "snv") return PreprocessMethod::snv;
    if (name == "sg1") return PreprocessMethod::sg1;
    throw BadConfig("unknown preprocess method: " + name);
}

std::string preprocess_method_name(PreprocessMethod m) {
    switch (m) {
    case PreprocessMethod::raw: return "raw";
    case PreprocessMethod::msc: return "msc";
    case PreprocessMethod::snv: return "snv";
    case PreprocessMethod::sg1: return "sg1";
    }
    return "raw";
}

void PreprocessSpec::validate() const {
    if (sg_window < 5 || sg_window % 2 == 0)
        throw BadWindow("sg_window must be odd and >= 5");
    if (sg_polyorder < 1 || sg_polyorder >= sg_window)
        throw BadWindow("sg_polyorder must be in [1, sg_window)");
}

Eigen::VectorXd snv(const Eigen::VectorXd& spectrum) {
    const auto n = spectrum.size();
    if (n < 2) throw ZeroVariance("snv needs at least two bands");
    const double mean = spectrum.mean();
    const double ss = (spectrum.array() - mean).square().sum();
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (!(sd > 0.0)) throw ZeroVariance("snv: constant spectrum");
    return (spectrum.array() - mean) / sd;
}

Eigen::MatrixXd msc(const Eigen::MatrixXd& X, const Eigen::VectorXd& reference) {
    if (X.cols() != reference.size())
        throw ShapeMismatch("msc: reference length != band count");
    const double ref_mean = reference.mean();
    const Eigen::VectorXd ref_c = reference.array() - ref_mean;
    const double sxx = ref_c.squaredNorm();
    if (!(sxx > 0.0)) throw ZeroVariance("msc: constant reference spectrum");

    Eigen::MatrixXd out(X.rows(), X.cols());
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        const Eigen::VectorXd row = X.row(i);
        const double row_mean = row.mean();
        const double sxy = ref_c.dot((row.array() - row_mean).matrix());
        const double b = sxy / sxx;
        const double a = row_mean - b * ref_mean;
        if (std::abs(b) < 1e-12)
            throw DegenerateFit("msc: slope underflow on row " + std::to_string(i));
        out.row(i) = (row.array() - a) / b;
    }
    return out;
}

Eigen::VectorXd sg_first_derivative_coeffs(int window, int polyorder) {
    if (window < 5 || window % 2 == 0) throw BadWindow("window must be odd and >= 5");
    if (polyorder < 1 || polyorder >= window)
        throw BadWindow("polyorder must be in [1, window)");
    const int half = window / 2;
    // Vandermonde over offsets -half..half; the filter is row 1 of the
    // pseudoinverse (A^T A)^-1 A^T, i.e. the LS estimate of the linear term.
    Eigen::MatrixXd A(window, polyorder + 1);
    for (int i = 0; i < window; ++i) {
        double p = 1.0;
        for (int j = 0; j <= polyorder; ++j) {
            A(i, j) = p;
            p *= static_cast<double>(i - half);
        }
    }
    Eigen::MatrixXd pinv = (A.transpose() * A).ldlt().solve(A.transpose());
    return pinv.row(1);
}

Eigen::MatrixXd sg_first_derivative(const Eigen::MatrixXd& X, int window, int polyorder) {
    if (window % 2 == 0 || window > X.cols())
        throw BadWindow("window must be odd and <= band count");
    const Eigen::VectorXd coeffs = sg_first_derivative_coeffs(window, polyorder);
    const Eigen::Index out_cols = X.cols() - window + 1;
    Eigen::MatrixXd out(X.rows(), out_cols);
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        for (Eigen::Index c = 0; c < out_cols; ++c)
            out(i, c) = X.row(i).segment(c, window).dot(coeffs);
    return out;
}

PreprocessModel fit_preprocess(const PreprocessSpec& spec, const Eigen::MatrixXd& X_cal,
                               const std::vector<double>& wavelengths_nm) {
    spec.validate();
    if (static_cast<Eigen::Index>(wavelengths_nm.size()) != X_cal.cols())
        throw ShapeMismatch("wavelength axis length != band count");
    PreprocessModel model;
    model.spec = spec;
    model.wavelengths_nm = wavelengths_nm;
    model.out_wavelengths_nm = wavelengths_nm;
    if (spec.method == PreprocessMethod::msc) {
        model.msc_reference = X_cal.colwise().mean();
    } else if (spec.method == PreprocessMethod::sg1) {
        if (spec.sg_window > X_cal.cols())
            throw BadWindow("sg_window exceeds band count");
        const int half = spec.sg_window / 2;
        model.out_wavelengths_nm.assign(wavelengths_nm.begin() + half,
                                        wavelengths_nm.end() - half);
    }
    return model;
}

Eigen::MatrixXd apply_preprocess(const PreprocessModel& model, const Eigen::MatrixXd& X) {
    if (static_cast<Eigen::Index>(model.wavelengths_nm.size()) != X.cols())
        throw ShapeMismatch("matrix band count != fitted axis");
    switch (model.spec.method) {
    case PreprocessMethod::raw:
        return X;
    case PreprocessMethod::snv: {
        Eigen::MatrixXd out(X.rows(), X.cols());
        for (Eigen::Index i = 0; i < X.rows(); ++i)
            out.row(i) = snv(X.row(i).transpose()).transpose();
        return out;
    }
    case PreprocessMethod::msc:
        return msc(X, model.msc_reference);
    case PreprocessMethod::sg1:
        return sg_first_derivative(X, model.spec.sg_window, model.spec.sg_polyorder);
    }
    throw BadConfig("unreachable preprocess method");
}

} // namespace sforge
