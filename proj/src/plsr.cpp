#include "sforge/plsr.hpp"
#include "sforge/csv.hpp"
#include "sforge/errors.hpp"
#include "sforge/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

namespace sforge {

namespace {

struct NipalsComponents {
    Eigen::MatrixXd W, P; // B x extracted
    Eigen::VectorXd q;    // extracted
    int extracted = 0;
    bool rank_deficient = false;
};

// Core NIPALS loop on centered copies.  Components are nested: the first a
// columns depend only on the input, never on how many more were requested,
// which is what lets LOOCV reuse one extraction across all LV counts.
NipalsComponents nipals_components(Eigen::MatrixXd Xc, Eigen::VectorXd yc, int max_a) {
    const Eigen::Index bands = Xc.cols();
    NipalsComponents out;
    out.W.resize(bands, max_a);
    out.P.resize(bands, max_a);
    out.q.resize(max_a);
    for (int a = 0; a < max_a; ++a) {
        const Eigen::VectorXd v = Xc.transpose() * yc;
        const double vn = v.norm();
        if (vn < 1e-150) break; // response exhausted: clean stop, fewer LVs
        const Eigen::VectorXd w = v / vn;
        const Eigen::VectorXd t = Xc * w;
        const double tt = t.squaredNorm();
        if (tt < 1e-14) {
            out.rank_deficient = true;
            break;
        }
        const Eigen::VectorXd p = Xc.transpose() * t / tt;
        const double qa = yc.dot(t) / tt;
        Xc -= t * p.transpose();
        yc -= qa * t;
        out.W.col(a) = w;
        out.P.col(a) = p;
        out.q(a) = qa;
        ++out.extracted;
    }
    out.W.conservativeResize(bands, out.extracted);
    out.P.conservativeResize(bands, out.extracted);
    out.q.conservativeResize(out.extracted);
    return out;
}

Eigen::VectorXd assemble_beta(const Eigen::MatrixXd& W, const Eigen::MatrixXd& P,
                              const Eigen::VectorXd& q) {
    if (W.cols() == 0) return Eigen::VectorXd::Zero(W.rows());
    const Eigen::MatrixXd ptw = P.transpose() * W;
    const Eigen::VectorXd z = ptw.fullPivLu().solve(q);
    return W * z;
}

} // namespace

SplitIndices random_split(int n, double cal_ratio, double val_ratio, double pred_ratio,
                          std::uint64_t seed) {
    if (n < 5) throw BadConfig("random_split needs n >= 5");
    const double sum = cal_ratio + val_ratio + pred_ratio;
    if (std::abs(sum - 1.0) > 1e-9) throw BadRatios("split ratios must sum to 1");
    if (cal_ratio < 0 || val_ratio < 0 || pred_ratio < 0)
        throw BadRatios("split ratios must be nonnegative");

    const double ratios[3] = {cal_ratio, val_ratio, pred_ratio};
    int sizes[3];
    double frac[3];
    int assigned = 0;
    for (int k = 0; k < 3; ++k) {
        const double exact = ratios[k] * n;
        sizes[k] = static_cast<int>(std::floor(exact));
        frac[k] = exact - sizes[k];
        assigned += sizes[k];
    }
    int order[3] = {0, 1, 2};
    std::stable_sort(order, order + 3, [&](int a, int b) { return frac[a] > frac[b]; });
    for (int k = 0; assigned < n; ++k, ++assigned) ++sizes[order[k % 3]];

    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng(seed);
    rng.shuffle(perm);

    SplitIndices split;
    split.seed = seed;
    split.calibration.assign(perm.begin(), perm.begin() + sizes[0]);
    split.validation.assign(perm.begin() + sizes[0], perm.begin() + sizes[0] + sizes[1]);
    split.prediction.assign(perm.begin() + sizes[0] + sizes[1], perm.end());
    std::sort(split.calibration.begin(), split.calibration.end());
    std::sort(split.validation.begin(), split.validation.end());
    std::sort(split.prediction.begin(), split.prediction.end());
    return split;
}

PlsrModel plsr_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int n_lv) {
    if (X.rows() != y.size()) throw ShapeMismatch("plsr_fit: X rows != y length");
    if (X.rows() < 3) throw BadConfig("plsr_fit needs at least 3 samples");
    if (n_lv < 1 || n_lv > std::min<Eigen::Index>(X.rows() - 1, X.cols()))
        throw BadConfig("n_lv must be in [1, min(n-1, B)]");

    PlsrModel model;
    model.x_mean = X.colwise().mean();
    model.y_mean = y.mean();
    const Eigen::MatrixXd Xc = X.rowwise() - model.x_mean.transpose();
    const Eigen::VectorXd yc = y.array() - model.y_mean;

    NipalsComponents comp = nipals_components(Xc, yc, n_lv);
    if (comp.rank_deficient)
        throw RankDeficient("score norm collapsed at component " +
                            std::to_string(comp.extracted + 1));
    model.weights = std::move(comp.W);
    model.x_loadings = std::move(comp.P);
    model.y_loadings = std::move(comp.q);
    model.n_lv = comp.extracted;
    model.beta = assemble_beta(model.weights, model.x_loadings, model.y_loadings);
    if (model.n_lv == 0) model.beta = Eigen::VectorXd::Zero(X.cols());
    return model;
}

Eigen::VectorXd plsr_predict(const PlsrModel& model, const Eigen::MatrixXd& X) {
    if (X.cols() != model.x_mean.size())
        throw ShapeMismatch("plsr_predict: band count != model");
    return ((X.rowwise() - model.x_mean.transpose()) * model.beta).array() + model.y_mean;
}

LvSelection select_lv_loocv(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                            int max_lv) {
    const int n = static_cast<int>(X.rows());
    if (X.rows() != y.size()) throw ShapeMismatch("select_lv_loocv: X rows != y length");
    if (max_lv < 1 || max_lv > std::min<Eigen::Index>(n - 2, X.cols()))
        throw BadConfig("max_lv must be in [1, min(n-2, B)]");

    std::vector<double> sse(max_lv, 0.0);
    std::vector<bool> infinite(max_lv, false);

    Eigen::MatrixXd Xf(n - 1, X.cols());
    Eigen::VectorXd yf(n - 1);
    for (int i = 0; i < n; ++i) {
        Eigen::Index r = 0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            Xf.row(r) = X.row(j);
            yf(r) = y(j);
            ++r;
        }
        PlsrModel fold;
        fold.x_mean = Xf.colwise().mean();
        fold.y_mean = yf.mean();
        const Eigen::MatrixXd Xc = Xf.rowwise() - fold.x_mean.transpose();
        const Eigen::VectorXd yc = yf.array() - fold.y_mean;
        const NipalsComponents comp = nipals_components(Xc, yc, max_lv);

        for (int a = 1; a <= max_lv; ++a) {
            if (a > comp.extracted && comp.rank_deficient) {
                infinite[a - 1] = true;
                continue;
            }
            const int used = std::min(a, comp.extracted);
            // Concrete prefix copies so the arithmetic matches a direct
            // plsr_fit(Xf, yf, a) call bit for bit.
            const Eigen::MatrixXd Wa = comp.W.leftCols(used);
            const Eigen::MatrixXd Pa = comp.P.leftCols(used);
            const Eigen::VectorXd qa = comp.q.head(used);
            fold.weights = Wa;
            fold.x_loadings = Pa;
            fold.y_loadings = qa;
            fold.n_lv = used;
            fold.beta = used == 0 ? Eigen::VectorXd::Zero(X.cols())
                                  : assemble_beta(Wa, Pa, qa);
            const Eigen::VectorXd pred = plsr_predict(fold, X.row(i));
            const double err = pred(0) - y(i);
            sse[a - 1] += err * err;
        }
    }

    LvSelection sel;
    sel.rmsecv.resize(max_lv);
    for (int a = 0; a < max_lv; ++a)
        sel.rmsecv[a] = infinite[a] ? std::numeric_limits<double>::infinity()
                                    : std::sqrt(sse[a] / n);
    sel.best_lv = 1;
    for (int a = 2; a <= max_lv; ++a)
        if (sel.rmsecv[a - 1] < sel.rmsecv[sel.best_lv - 1]) sel.best_lv = a;
    return sel;
}

RegressionReport regression_report(const Eigen::VectorXd& y_true,
                                   const Eigen::VectorXd& y_pred) {
    if (y_true.size() != y_pred.size())
        throw ShapeMismatch("regression_report: length mismatch");
    if (y_true.size() < 2) throw BadConfig("regression_report needs n >= 2");
    const double mean = y_true.mean();
    const double ss_tot = (y_true.array() - mean).square().sum();
    if (!(ss_tot > 0.0)) throw ZeroVariance("y_true has no variance");
    const double ss_res = (y_true - y_pred).squaredNorm();
    RegressionReport rep;
    rep.n = static_cast<int>(y_true.size());
    rep.r2 = 1.0 - ss_res / ss_tot;
    rep.rmse = std::sqrt(ss_res / y_true.size());
    return rep;
}

double rpd(const Eigen::VectorXd& y_true_eval, double rmsep) {
    if (y_true_eval.size() < 2) throw BadConfig("rpd needs n >= 2");
    if (!(rmsep > 0.0)) throw BadConfig("rpd needs rmsep > 0");
    const double mean = y_true_eval.mean();
    const double ss = (y_true_eval.array() - mean).square().sum();
    const double sd = std::sqrt(ss / static_cast<double>(y_true_eval.size() - 1));
    return sd / rmsep;
}

// -- serialization -----------------------------------------------------------

namespace {

void write_vector_line(std::ofstream& out, const std::string& tag,
                       const Eigen::VectorXd& v) {
    out << tag;
    for (Eigen::Index i = 0; i < v.size(); ++i) out << ',' << fmt_g17(v(i));
    out << '\n';
}

Eigen::VectorXd parse_vector_line(const std::vector<std::string>& fields,
                                  const std::string& tag) {
    if (fields.empty() || fields[0] != tag)
        throw ParseError("PLSR1: expected " + tag + " line");
    Eigen::VectorXd v(static_cast<Eigen::Index>(fields.size()) - 1);
    for (std::size_t i = 1; i < fields.size(); ++i)
        v(static_cast<Eigen::Index>(i) - 1) = parse_double(fields[i]);
    return v;
}

} // namespace

void save_plsr_model(const std::string& path, const PlsrModel& model) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << "PLSR1\n";
    out << "n_lv," << model.n_lv << '\n';
    out << "y_mean," << fmt_g17(model.y_mean) << '\n';
    write_vector_line(out, "x_mean", model.x_mean);
    write_vector_line(out, "beta", model.beta);
    write_vector_line(out, "q", model.y_loadings);
    for (int a = 0; a < model.n_lv; ++a) {
        write_vector_line(out, "W" + std::to_string(a), model.weights.col(a));
        write_vector_line(out, "P" + std::to_string(a), model.x_loadings.col(a));
    }
    if (!out) throw IoError("write failed: " + path);
}

PlsrModel load_plsr_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || trim(line) != "PLSR1")
        throw ParseError(path + ": missing PLSR1 magic");

    auto next_fields = [&](const char* what) {
        if (!std::getline(in, line)) throw ParseError(path + ": truncated at " + what);
        return split(line, ',');
    };

    PlsrModel model;
    auto f = next_fields("n_lv");
    if (f.size() != 2 || f[0] != "n_lv") throw ParseError(path + ": bad n_lv line");
    model.n_lv = static_cast<int>(parse_long(f[1]));
    f = next_fields("y_mean");
    if (f.size() != 2 || f[0] != "y_mean") throw ParseError(path + ": bad y_mean line");
    model.y_mean = parse_double(f[1]);
    model.x_mean = parse_vector_line(next_fields("x_mean"), "x_mean");
    model.beta = parse_vector_line(next_fields("beta"), "beta");
    model.y_loadings = parse_vector_line(next_fields("q"), "q");

    const Eigen::Index bands = model.x_mean.size();
    model.weights.resize(bands, model.n_lv);
    model.x_loadings.resize(bands, model.n_lv);
    for (int a = 0; a < model.n_lv; ++a) {
        model.weights.col(a) =
            parse_vector_line(next_fields("W"), "W" + std::to_string(a));
        model.x_loadings.col(a) =
            parse_vector_line(next_fields("P"), "P" + std::to_string(a));
    }
    if (model.beta.size() != bands) throw ParseError(path + ": beta length mismatch");
    return model;
}

} // namespace sforge
