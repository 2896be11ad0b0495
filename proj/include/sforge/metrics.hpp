#pragma once

#include <utility>
#include <vector>

namespace sforge {

// ---------------------------------------------------------------------------
// Reconstruction quality metrics over equally shaped tensors (flat views).
// ---------------------------------------------------------------------------

// Mean over elements of |rc - gt| / max(gt, floor).
double mrae(const std::vector<double>& rc, const std::vector<double>& gt,
            double floor = 1e-4);

double rmse_metric(const std::vector<double>& rc, const std::vector<double>& gt);

// 10*log10(peak^2 * n / ||rc - gt||^2); equal inputs return +infinity.
double psnr(const std::vector<double>& rc, const std::vector<double>& gt,
            double peak = 1.0);

// MRAE loss and its elementwise gradient d loss / d rc; sign(0) = 0.
std::pair<double, std::vector<double>> mrae_loss_grad(const std::vector<double>& pred,
                                                      const std::vector<double>& gt,
                                                      double floor = 1e-4);

} // namespace sforge
