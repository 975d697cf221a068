#include "pqi/calibrate.hpp"

#include <algorithm>
#include <cmath>

#include "pqi/error.hpp"

namespace pqi {

double log1p_exp(double u) {
  if (u > 0.0) return u + std::log1p(std::exp(-u));
  return std::log1p(std::exp(u));
}

double sigmoid_probability(double abundance, const CalibrationModel& model) {
  double u = model.A * abundance + model.B;
  // 1/(1+exp(u)) via the stable branch.
  if (u >= 0.0) {
    double e = std::exp(-u);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(u));
}

double negative_log_likelihood(const std::vector<double>& abundances,
                               const std::vector<std::uint8_t>& indicators,
                               double A, double B) {
  double nll = 0.0;
  for (std::size_t k = 0; k < abundances.size(); ++k) {
    double u = A * abundances[k] + B;
    if (indicators[k]) {
      nll += log1p_exp(u);
    } else {
      nll += log1p_exp(-u);  // == -u + log(1+exp(u))
    }
  }
  return nll;
}

void nll_gradient(const std::vector<double>& abundances,
                  const std::vector<std::uint8_t>& indicators, double A,
                  double B, double& dA, double& dB) {
  dA = 0.0;
  dB = 0.0;
  for (std::size_t k = 0; k < abundances.size(); ++k) {
    double c = abundances[k];
    double u = A * c + B;
    // d/du of the k-th term: sigma(u) - (1 - r_k), sigma(u) = e^u/(1+e^u).
    double sig = u >= 0.0 ? 1.0 / (1.0 + std::exp(-u))
                          : std::exp(u) / (1.0 + std::exp(u));
    double g = sig - (indicators[k] ? 0.0 : 1.0);
    dA += g * c;
    dB += g;
  }
}

namespace {

// Minimizes the NLL over (A, B) for fixed indicators; damped Newton with
// step halving. The objective is convex, so this reaches the minimum to
// gradient tolerance.
void m_step(const std::vector<double>& c,
            const std::vector<std::uint8_t>& r, double& A, double& B) {
  constexpr int kMaxInner = 50;
  constexpr double kGradTol = 1e-8;
  double nll = negative_log_likelihood(c, r, A, B);
  for (int it = 0; it < kMaxInner; ++it) {
    double dA, dB;
    nll_gradient(c, r, A, B, dA, dB);
    if (std::max(std::abs(dA), std::abs(dB)) < kGradTol) break;

    double haa = 0.0, hab = 0.0, hbb = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
      double u = A * c[k] + B;
      double sig = u >= 0.0 ? 1.0 / (1.0 + std::exp(-u))
                            : std::exp(u) / (1.0 + std::exp(u));
      double w = sig * (1.0 - sig);
      haa += w * c[k] * c[k];
      hab += w * c[k];
      hbb += w;
    }
    double det = haa * hbb - hab * hab;
    double stepA, stepB;
    if (det > 1e-300 && haa > 0.0) {
      stepA = -(hbb * dA - hab * dB) / det;
      stepB = -(haa * dB - hab * dA) / det;
    } else {
      // Flat Hessian (saturated sigmoid): fall back to a gradient step.
      stepA = -dA;
      stepB = -dB;
    }
    double scale = 1.0;
    bool moved = false;
    for (int h = 0; h < 60; ++h) {
      double candA = A + scale * stepA;
      double candB = B + scale * stepB;
      double cand_nll = negative_log_likelihood(c, r, candA, candB);
      if (cand_nll <= nll) {
        A = candA;
        B = candB;
        nll = cand_nll;
        moved = true;
        break;
      }
      scale *= 0.5;
    }
    if (!moved) break;
  }
}

std::vector<std::uint8_t> e_step(const std::vector<double>& c, double A,
                                 double B) {
  std::vector<std::uint8_t> r(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) {
    double u = A * c[k] + B;
    r[k] = u <= 0.0 ? 1 : 0;  // ties assign r_k = 1
  }
  return r;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

EmFitResult em_fit(const std::vector<double>& abundances, int max_iter) {
  if (abundances.size() < 2) {
    throw Error(Errc::Degenerate,
                "EM calibration needs at least two abundance values");
  }
  double cmin = *std::min_element(abundances.begin(), abundances.end());
  double cmax = *std::max_element(abundances.begin(), abundances.end());
  if (cmax - cmin <= 0.0) {
    throw Error(Errc::Degenerate,
                "all abundances equal; no separating sigmoid exists");
  }

  double A = -1.0 / (cmax - cmin);
  double B = -A * median(abundances);

  EmFitResult out;
  std::vector<std::uint8_t> prev_r, prev_prev_r;
  std::vector<std::uint8_t> r;
  int iter = 0;
  bool converged = false;
  for (; iter < max_iter; ++iter) {
    r = e_step(abundances, A, B);
    if (!prev_r.empty() && r == prev_r) {
      converged = true;
      break;
    }
    if (!prev_prev_r.empty() && r == prev_prev_r) {
      // 2-cycle between two indicator configurations; keep the better one.
      double nll_here = 0.0, nll_prev = 0.0;
      double Ah = A, Bh = B;
      m_step(abundances, r, Ah, Bh);
      nll_here = negative_log_likelihood(abundances, r, Ah, Bh);
      double Ap = A, Bp = B;
      m_step(abundances, prev_r, Ap, Bp);
      nll_prev = negative_log_likelihood(abundances, prev_r, Ap, Bp);
      if (nll_prev < nll_here) {
        r = prev_r;
        A = Ap;
        B = Bp;
      } else {
        A = Ah;
        B = Bh;
      }
      converged = true;
      break;
    }
    m_step(abundances, r, A, B);
    prev_prev_r = std::move(prev_r);
    prev_r = r;
  }
  if (converged && iter < max_iter) ++iter;

  out.model.A = A;
  out.model.B = B;
  out.model.iterations = iter;
  out.model.converged = converged;
  out.model.final_nll = negative_log_likelihood(abundances, r, A, B);
  out.indicators = std::move(r);
  return out;
}

std::vector<double> calibrated_probabilities(const std::vector<double>& abundances,
                                             const CalibrationModel& model) {
  // On cleanly separable abundances the fitted |A| is huge and the raw
  // sigmoid collapses whole abundance ranges onto exact 0.0/1.0 in
  // double precision, losing the strict monotonicity the downstream
  // ranking relies on. Rescaling (A, B) about the decision boundary
  // keeps |A c + B| below saturation without moving the boundary or
  // reordering any probabilities.
  constexpr double kSaturationCap = 25.0;
  double umax = 0.0;
  for (double c : abundances) {
    umax = std::max(umax, std::abs(model.A * c + model.B));
  }
  CalibrationModel scaled = model;
  if (umax > kSaturationCap) {
    double s = kSaturationCap / umax;
    scaled.A *= s;
    scaled.B *= s;
  }
  std::vector<double> out(abundances.size());
  for (std::size_t k = 0; k < abundances.size(); ++k) {
    out[k] = sigmoid_probability(abundances[k], scaled);
  }
  return out;
}

std::vector<double> normalized_score(const std::vector<double>& abundances) {
  double cmax = 0.0;
  for (double c : abundances) cmax = std::max(cmax, c);
  if (cmax <= 0.0) {
    throw Error(Errc::ZeroMaximum,
                "cannot normalize: maximum protein abundance is zero");
  }
  std::vector<double> out(abundances.size());
  for (std::size_t k = 0; k < abundances.size(); ++k) {
    out[k] = abundances[k] / cmax;
  }
  return out;
}

}  // namespace pqi
