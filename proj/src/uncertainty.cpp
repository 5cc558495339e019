#include "daopf/uncertainty.hpp"

#include <cmath>

#include "daopf/errors.hpp"

namespace daopf {

namespace {

double weibull_pdf(double g, double c, double k) {
  if (g <= 0.0) return 0.0;
  double t = std::pow(g / c, k);
  return (k / c) * std::pow(g / c, k - 1.0) * std::exp(-t);
}

}  // namespace

double BimodalWeibull::pdf_irradiance(double g) const {
  return w1 * weibull_pdf(g, c1, k1) + w2 * weibull_pdf(g, c2, k2);
}

double BimodalWeibull::pdf_power(double p_mw) const {
  double scale = power_scale();
  if (p_mw <= 0.0 || scale <= 0.0) return 0.0;
  return pdf_irradiance(p_mw / scale) / scale;
}

double BimodalWeibull::mean_power_mw() const {
  double mean_g = w1 * c1 * std::tgamma(1.0 + 1.0 / k1) + w2 * c2 * std::tgamma(1.0 + 1.0 / k2);
  return mean_g * power_scale();
}

BimodalWeibull BimodalWeibull::scaled_to_mean(double mean_mw) const {
  BimodalWeibull out = *this;
  double cur = mean_power_mw();
  if (cur <= 0.0) throw MissingModelError("cannot rescale a degenerate PV model");
  double f = mean_mw / cur;
  out.c1 *= f;
  out.c2 *= f;
  return out;
}

double NormalLoad::pdf(double l) const {
  double z = (l - mu_mw) / sigma_mw;
  return std::exp(-0.5 * z * z) / (sigma_mw * std::sqrt(2.0 * M_PI));
}

void validate(const BimodalWeibull& model) {
  if (model.w1 < 0.0 || model.w2 < 0.0 || std::abs(model.w1 + model.w2 - 1.0) > 1e-9)
    throw ValidationError("weibull weights must be nonnegative and sum to 1");
  if (model.c1 <= 0.0 || model.c2 <= 0.0) throw ValidationError("weibull scales must be > 0");
  if (model.k1 <= 0.0 || model.k2 <= 0.0) throw ValidationError("weibull shapes must be > 0");
  if (model.eta <= 0.0 || model.s_capacity <= 0.0)
    throw ValidationError("pv efficiency and capacity scalar must be > 0");
}

void validate(const NormalLoad& model) {
  if (model.sigma_mw <= 0.0) throw ValidationError("load sigma must be > 0");
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa, double b, double fb,
               double m, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double fa, double b, double fb,
                double m, double fm, double whole, double tol, int depth) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = simpson(f, a, fa, m, fm, lm, flm);
  double right = simpson(f, m, fm, b, fb, rm, frm);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double lo, double hi, double abs_tol) {
  if (hi <= lo) return 0.0;
  // Split into a few panels first so narrow peaks are not missed.
  const int panels = 16;
  double h = (hi - lo) / panels;
  double total = 0.0;
  for (int i = 0; i < panels; ++i) {
    double a = lo + i * h, b = a + h, m = 0.5 * (a + b);
    double fa = f(a), fb = f(b), fm = f(m);
    double whole = simpson(f, a, fa, b, fb, m, fm);
    total += adaptive(f, a, fa, b, fb, m, fm, whole, abs_tol / panels, 40);
  }
  return total;
}

double confidence(const BimodalWeibull& model, double lower_mw, double upper_mw) {
  if (lower_mw > upper_mw) throw DimensionError("confidence: lower > upper");
  double lo = std::max(lower_mw, 0.0);
  // Weibull survival at g = 12 c is exp(-12^k), below any tolerance here;
  // clamping keeps the fixed-panel quadrature from undersampling huge bands
  double support = 12.0 * std::max(model.c1, model.c2) * model.power_scale();
  double hi = std::min(upper_mw, support);
  if (hi <= lo) return 0.0;
  return integrate([&](double p) { return model.pdf_power(p); }, lo, hi);
}

double confidence(const NormalLoad& model, double lower_mw, double upper_mw) {
  if (lower_mw > upper_mw) throw DimensionError("confidence: lower > upper");
  // Quadrature like every other model; the closed-form CDF lives in test
  // code as the independent oracle. Tails beyond 12 sigma carry no mass
  // at the 1e-8 tolerance.
  double lo = std::max(lower_mw, model.mu_mw - 12.0 * model.sigma_mw);
  double hi = std::min(upper_mw, model.mu_mw + 12.0 * model.sigma_mw);
  if (hi <= lo) return 0.0;
  return integrate([&](double l) { return model.pdf(l); }, lo, hi);
}

}  // namespace daopf
