#include "sforge/errors.hpp"
#include "sforge/preprocess.hpp"
#include "sforge/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace sforge;

namespace {

Eigen::MatrixXd random_spectra(int n, int b, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::MatrixXd X(n, b);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < b; ++j) X(i, j) = rng.uniform(0.1, 0.9);
    return X;
}

} // namespace

TEST_SUITE("preprocess") {

TEST_CASE("snv hand case [1,2,3] -> [-1,0,1]") {
    Eigen::VectorXd x(3);
    x << 1.0, 2.0, 3.0;
    const Eigen::VectorXd z = snv(x);
    CHECK(z(0) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(z(1) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(z(2) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("snv is idempotent and affine-invariant") {
    Rng rng(12);
    Eigen::VectorXd x(20);
    for (int i = 0; i < 20; ++i) x(i) = rng.uniform(0.0, 1.0);
    const Eigen::VectorXd z = snv(x);
    const Eigen::VectorXd zz = snv(z);
    const Eigen::VectorXd za = snv((2.5 * x.array() + 0.7).matrix());
    for (int i = 0; i < 20; ++i) {
        CHECK(std::abs(zz(i) - z(i)) <= 1e-12);
        CHECK(std::abs(za(i) - z(i)) <= 1e-12);
    }
    // mean 0, sample sd 1
    CHECK(std::abs(z.mean()) <= 1e-14);
    const double sd = std::sqrt(z.squaredNorm() / (z.size() - 1));
    CHECK(sd == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("snv rejects constant spectra") {
    Eigen::VectorXd x = Eigen::VectorXd::Constant(5, 0.4);
    CHECK_THROWS_AS(snv(x), ZeroVariance);
}

TEST_CASE("msc identity and affine inversion") {
    Rng rng(77);
    Eigen::VectorXd ref(15);
    for (int i = 0; i < 15; ++i) ref(i) = rng.uniform(0.2, 0.8);

    // a row equal to the reference passes through unchanged
    Eigen::MatrixXd X1 = ref.transpose();
    const Eigen::MatrixXd out1 = msc(X1, ref);
    for (int j = 0; j < 15; ++j)
        CHECK(std::abs(out1(0, j) - ref(j)) <= 1e-10);

    // a row that is an affine image of the reference maps back onto it
    Eigen::MatrixXd X2 = (1.8 * ref.array() + 0.05).matrix().transpose();
    const Eigen::MatrixXd out2 = msc(X2, ref);
    for (int j = 0; j < 15; ++j)
        CHECK(std::abs(out2(0, j) - ref(j)) <= 1e-10);
}

TEST_CASE("msc matches the closed-form per-row regression oracle") {
    const int n = 8, B = 25;
    const Eigen::MatrixXd X = random_spectra(n, B, 301);
    const Eigen::VectorXd ref = X.colwise().mean();
    const Eigen::MatrixXd out = msc(X, ref);

    const double ref_mean = ref.mean();
    for (int i = 0; i < n; ++i) {
        const double row_mean = X.row(i).mean();
        double sxy = 0, sxx = 0;
        for (int j = 0; j < B; ++j) {
            sxy += (ref(j) - ref_mean) * (X(i, j) - row_mean);
            sxx += (ref(j) - ref_mean) * (ref(j) - ref_mean);
        }
        const double b = sxy / sxx;
        const double a = row_mean - b * ref_mean;
        for (int j = 0; j < B; ++j)
            CHECK(std::abs(out(i, j) - (X(i, j) - a) / b) <= 1e-10);
    }
}

TEST_CASE("msc rejects rows uncorrelated with the reference") {
    Eigen::VectorXd ref(4);
    ref << 0.1, 0.2, 0.3, 0.4;
    Eigen::MatrixXd flat = Eigen::MatrixXd::Constant(1, 4, 0.5);
    CHECK_THROWS_AS(msc(flat, ref), DegenerateFit);
}

TEST_CASE("sg first derivative is exact on a linear ramp (window 7)") {
    const int B = 20;
    Eigen::MatrixXd X(1, B);
    for (int j = 0; j < B; ++j) X(0, j) = 3.0 * j;
    const Eigen::MatrixXd d = sg_first_derivative(X, 7, 2);
    REQUIRE(d.cols() == B - 6);
    for (int j = 0; j < d.cols(); ++j)
        CHECK(d(0, j) == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("sg first derivative is exact on a quadratic (window 5)") {
    const int B = 15;
    Eigen::MatrixXd X(1, B);
    for (int j = 0; j < B; ++j) X(0, j) = double(j) * j;
    const Eigen::MatrixXd d = sg_first_derivative(X, 5, 2);
    REQUIRE(d.cols() == B - 4);
    // retained centers are indices 2..B-3; derivative of i^2 is 2i
    for (int j = 0; j < d.cols(); ++j)
        CHECK(d(0, j) == doctest::Approx(2.0 * (j + 2)).epsilon(1e-9));
}

TEST_CASE("sg coefficients are antisymmetric and zero-sum") {
    const Eigen::VectorXd c = sg_first_derivative_coeffs(11, 2);
    REQUIRE(c.size() == 11);
    CHECK(std::abs(c.sum()) <= 1e-12);
    for (int i = 0; i < 11; ++i)
        CHECK(std::abs(c(i) + c(10 - i)) <= 1e-12);
}

TEST_CASE("sg window validation") {
    Eigen::MatrixXd X = random_spectra(2, 12, 9);
    CHECK_THROWS_AS(sg_first_derivative(X, 4, 2), BadWindow);  // even
    CHECK_THROWS_AS(sg_first_derivative(X, 1, 0), BadWindow);  // too small
    CHECK_THROWS_AS(sg_first_derivative(X, 5, 5), BadWindow);  // order >= window
    CHECK_THROWS_AS(sg_first_derivative(X, 13, 2), BadWindow); // wider than B
    CHECK_THROWS_AS(sg_first_derivative(X, 5, 0), BadWindow);  // below derivative order
}

TEST_CASE("fit freezes the msc reference on the calibration block") {
    const Eigen::MatrixXd Xcal = random_spectra(6, 10, 41);
    const Eigen::MatrixXd Xnew = random_spectra(3, 10, 42);
    PreprocessSpec spec;
    spec.method = PreprocessMethod::msc;
    const std::vector<double> wl = {400, 410, 420, 430, 440, 450, 460, 470, 480, 490};
    const PreprocessModel model = fit_preprocess(spec, Xcal, wl);

    const Eigen::VectorXd ref = Xcal.colwise().mean();
    for (int j = 0; j < 10; ++j)
        CHECK(model.msc_reference(j) == doctest::Approx(ref(j)).epsilon(1e-15));

    // applying to new rows uses the frozen reference, not the new rows' mean
    const Eigen::MatrixXd got = apply_preprocess(model, Xnew);
    const Eigen::MatrixXd want = msc(Xnew, ref);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 10; ++j)
            CHECK(got(i, j) == doctest::Approx(want(i, j)).epsilon(1e-14));
    CHECK(model.out_wavelengths_nm == wl);
}

TEST_CASE("sg1 model trims the wavelength axis") {
    const Eigen::MatrixXd Xcal = random_spectra(4, 12, 51);
    PreprocessSpec spec;
    spec.method = PreprocessMethod::sg1;
    spec.sg_window = 5;
    std::vector<double> wl;
    for (int j = 0; j < 12; ++j) wl.push_back(400.0 + 10.0 * j);
    const PreprocessModel model = fit_preprocess(spec, Xcal, wl);
    REQUIRE(model.out_wavelengths_nm.size() == 8);
    CHECK(model.out_wavelengths_nm.front() == 420.0);
    CHECK(model.out_wavelengths_nm.back() == 490.0);
    const Eigen::MatrixXd out = apply_preprocess(model, Xcal);
    CHECK(out.cols() == 8);
}

TEST_CASE("raw method is the identity") {
    const Eigen::MatrixXd X = random_spectra(3, 7, 61);
    PreprocessSpec spec;
    const PreprocessModel model =
        fit_preprocess(spec, X, std::vector<double>(7, 0.0));
    const Eigen::MatrixXd out = apply_preprocess(model, X);
    CHECK((out.array() == X.array()).all());
}

TEST_CASE("method names parse both ways") {
    CHECK(parse_preprocess_method("raw") == PreprocessMethod::raw);
    CHECK(parse_preprocess_method("snv") == PreprocessMethod::snv);
    CHECK(parse_preprocess_method("msc") == PreprocessMethod::msc);
    CHECK(parse_preprocess_method("sg1") == PreprocessMethod::sg1);
    CHECK_THROWS_AS(parse_preprocess_method("zzz"), BadConfig);
    CHECK(preprocess_method_name(PreprocessMethod::sg1) == std::string("sg1"));
}

} // TEST_SUITE
