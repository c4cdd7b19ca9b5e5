#include "pcc/nn/adam.hpp"

#include <cmath>

namespace pcc::nn {

void Adam::step(const std::vector<Parameter*>& params) const {
  const double b1 = options_.beta1, b2 = options_.beta2;
  for (Parameter* p : params) {
    p->adam_step += 1;
    const double t = static_cast<double>(p->adam_step);
    const double correction1 = 1.0 - std::pow(b1, t);
    const double correction2 = 1.0 - std::pow(b2, t);
    const double step_size = options_.lr / correction1;
    const double inv_sqrt_c2 = 1.0 / std::sqrt(correction2);
    Real* w = p->value.data();
    Real* m = p->adam_m.data();
    Real* v = p->adam_v.data();
    const Real* g = p->grad.data();
    for (std::size_t i = 0, n = p->value.size(); i < n; ++i) {
      m[i] = static_cast<Real>(b1 * m[i] + (1.0 - b1) * g[i]);
      v[i] = static_cast<Real>(b2 * v[i] + (1.0 - b2) * g[i] * g[i]);
      const double denom = std::sqrt(static_cast<double>(v[i])) * inv_sqrt_c2 + options_.eps;
      w[i] = static_cast<Real>(w[i] - step_size * m[i] / denom);
    }
  }
}

double clip_grad_norm(const std::vector<Parameter*>& params, double max_norm) {
  double sq = 0.0;
  for (const Parameter* p : params) {
    for (Real g : p->grad.values()) sq += static_cast<double>(g) * g;
  }
  const double norm = std::sqrt(sq);
  if (max_norm > 0.0 && norm > max_norm) {
    const double scale = max_norm / norm;
    for (Parameter* p : params) {
      for (Real& g : p->grad.values()) g = static_cast<Real>(g * scale);
    }
  }
  return norm;
}

}  // namespace pcc::nn
