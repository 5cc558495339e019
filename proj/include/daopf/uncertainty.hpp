#pragma once

#include <functional>
#include <string>
#include <vector>

namespace daopf {

/// Bimodal Weibull mixture over irradiance g (kW/m^2); P_pv = eta * S * g.
struct BimodalWeibull {
  double w1 = 0.45, w2 = 0.55;  // weights, w1 + w2 = 1
  double c1 = 0.3, c2 = 0.7;    // scale, kW/m^2
  double k1 = 2.0, k2 = 3.5;    // shape
  double eta = 1.0;             // plant efficiency
  double s_capacity = 60.0;     // area-rating scalar: MW output per unit irradiance

  double pdf_irradiance(double g) const;
  double pdf_power(double p_mw) const;  // change of variables g = p / (eta S)
  double mean_power_mw() const;         // mixture mean times eta S
  double power_scale() const { return eta * s_capacity; }

  /// Same shape parameters rescaled so the mixture mean equals `mean_mw`.
  BimodalWeibull scaled_to_mean(double mean_mw) const;
};

struct NormalLoad {
  double mu_mw = 0.0;
  double sigma_mw = 1.0;

  double pdf(double l) const;
};

void validate(const BimodalWeibull& model);
void validate(const NormalLoad& model);

/// Adaptive composite-Simpson quadrature, absolute tolerance `abs_tol`.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double abs_tol = 1e-8);

double confidence(const BimodalWeibull& model, double lower_mw, double upper_mw);
double confidence(const NormalLoad& model, double lower_mw, double upper_mw);

struct ConfidenceResult {
  int hour = 0;
  std::string entity;  // "pv_bus_<id>" or "system_load"
  double lower_mw = 0.0;
  double upper_mw = 0.0;
  double confidence = 0.0;
  bool applicable = true;  // false e.g. for PV at night
};

}  // namespace daopf
