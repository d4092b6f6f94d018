#pragma once

#include "risudn/common.hpp"

namespace risudn {

/// Linear power-consumption model. BS: delta_p * P_tr + P_ns; RIS: Q * P_md + P_ms. Watts.
struct PowerModel {
  double p_tr = 1.0;
  double delta_p = 1.0;
  double p_ns = 14.7;
  double p_md = 0.012;
  double p_ms = 6.52;
  double noise = 7.96e-14;

  void validate() const {
    require(p_tr > 0.0, "PowerModel: transmit power must be positive");
    require(delta_p >= 0.0 && p_ns >= 0.0 && p_md >= 0.0 && p_ms >= 0.0 && noise >= 0.0,
            "PowerModel: power terms must be non-negative");
  }
  double bs_power() const { return delta_p * p_tr + p_ns; }
  double ris_power(int elements) const { return static_cast<double>(elements) * p_md + p_ms; }
  /// Power drawn per unit area by active BSs and RISs.
  double area_power(double lambda_active, double lambda_m, int elements) const {
    return lambda_active * bs_power() + lambda_m * ris_power(elements);
  }
};

}  // namespace risudn
