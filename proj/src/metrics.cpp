#include "sforge/metrics.hpp"
#include "sforge/errors.hpp"

#include <cmath>
#include <limits>

namespace sforge {

namespace {

void check_shapes(const std::vector<double>& rc, const std::vector<double>& gt) {
    if (rc.size() != gt.size() || rc.empty())
        throw ShapeMismatch("metric inputs must be nonempty and equally sized");
}

} // namespace

double mrae(const std::vector<double>& rc, const std::vector<double>& gt, double floor) {
    check_shapes(rc, gt);
    if (!(floor > 0.0)) throw BadConfig("mrae floor must be positive");
    double sum = 0.0;
    for (std::size_t i = 0; i < rc.size(); ++i)
        sum += std::abs(rc[i] - gt[i]) / std::max(gt[i], floor);
    return sum / static_cast<double>(rc.size());
}

double rmse_metric(const std::vector<double>& rc, const std::vector<double>& gt) {
    check_shapes(rc, gt);
    double sum = 0.0;
    for (std::size_t i = 0; i < rc.size(); ++i) {
        const double d = rc[i] - gt[i];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(rc.size()));
}

double psnr(const std::vector<double>& rc, const std::vector<double>& gt, double peak) {
    check_shapes(rc, gt);
    if (!(peak > 0.0)) throw BadConfig("psnr peak must be positive");
    double sse = 0.0;
    for (std::size_t i = 0; i < rc.size(); ++i) {
        const double d = rc[i] - gt[i];
        sse += d * d;
    }
    if (sse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(peak * peak * static_cast<double>(rc.size()) / sse);
}

std::pair<double, std::vector<double>> mrae_loss_grad(const std::vector<double>& pred,
                                                      const std::vector<double>& gt,
                                                      double floor) {
    check_shapes(pred, gt);
    if (!(floor > 0.0)) throw BadConfig("mrae floor must be positive");
    const double n = static_cast<double>(pred.size());
    std::vector<double> grad(pred.size(), 0.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double denom = std::max(gt[i], floor);
        const double diff = pred[i] - gt[i];
        sum += std::abs(diff) / denom;
        if (diff > 0.0)
            grad[i] = 1.0 / (denom * n);
        else if (diff < 0.0)
            grad[i] = -1.0 / (denom * n);
    }
    return {sum / n, std::move(grad)};
}

} // namespace sforge
