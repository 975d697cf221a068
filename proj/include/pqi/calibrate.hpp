#ifndef PQI_CALIBRATE_HPP
#define PQI_CALIBRATE_HPP

#include <cstdint>
#include <vector>

namespace pqi {

/// Sigmoid presence model p = 1 / (1 + exp(A*c + B)); fitted A is
/// negative so larger abundance maps to higher presence probability.
struct CalibrationModel {
  double A = 0.0;
  double B = 0.0;
  int iterations = 0;
  bool converged = false;
  double final_nll = 0.0;
};

struct EmFitResult {
  CalibrationModel model;
  std::vector<std::uint8_t> indicators;  // r_k per protein, input order
};

double sigmoid_probability(double abundance, const CalibrationModel& model);

/// Numerically stable log(1 + exp(u)).
double log1p_exp(double u);

double negative_log_likelihood(const std::vector<double>& abundances,
                               const std::vector<std::uint8_t>& indicators,
                               double A, double B);

/// Gradient of the negative log likelihood with respect to (A, B).
void nll_gradient(const std::vector<double>& abundances,
                  const std::vector<std::uint8_t>& indicators, double A,
                  double B, double& dA, double& dB);

/// Alternating hard-assignment EM: the E-step thresholds on the sign of
/// A*c + B, the M-step runs damped Newton on the two-parameter
/// likelihood. Stops when the indicator vector repeats (including
/// 2-cycles, resolved toward the lower-NLL configuration).
EmFitResult em_fit(const std::vector<double>& abundances, int max_iter = 100);

/// Probabilities for a whole abundance vector. When the fitted slope is
/// steep enough to saturate doubles, (A, B) are rescaled about the
/// decision boundary first so the map stays strictly monotone (no
/// collapse onto exact 0/1); ranking and indicators are unaffected.
std::vector<double> calibrated_probabilities(
    const std::vector<double>& abundances, const CalibrationModel& model);

/// score_k = c_k / max c_k.
std::vector<double> normalized_score(const std::vector<double>& abundances);

}  // namespace pqi

#endif
