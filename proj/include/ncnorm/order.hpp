#pragma once

// Exponent bookkeeping for the mixed L^q(L^p) norms: the pair (p, q), the
// derived exponent r with 1/r = |1/p - 1/q|, and the Hoelder conjugates
// p', q', r'.  r = infinity is kept symbolic (exponents through r become
// exact zeros, never tiny floats).

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ncnorm {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline double conjugate_exponent(double t) {
  if (std::isinf(t)) return 1.0;
  if (!(t >= 1.0)) throw std::invalid_argument("conjugate_exponent: requires t >= 1");
  if (t == 1.0) return kInf;
  return t / (t - 1.0);
}

struct NormOrder {
  double p = 2.0;
  double q = 2.0;
  double r = kInf;       // 1/r = |1/p - 1/q|; infinity iff p = q
  double p_dual = 2.0;
  double q_dual = 2.0;
  double r_dual = 1.0;   // conjugate of r

  bool sup_regime() const { return p <= q; }   // Eq. form: supremum over scalings
  bool inf_regime() const { return q <= p; }   // Eq. form: infimum over decompositions
  double inv_r() const { return std::isinf(r) ? 0.0 : 1.0 / r; }
};

inline NormOrder make_order(double p, double q) {
  auto in_range = [](double t) { return std::isinf(t) || (t >= 1.0 && std::isfinite(t)); };
  if (!in_range(p) || !in_range(q))
    throw std::invalid_argument("make_order: exponents must lie in [1, inf]");
  NormOrder ord;
  ord.p = p;
  ord.q = q;
  const double ip = std::isinf(p) ? 0.0 : 1.0 / p;
  const double iq = std::isinf(q) ? 0.0 : 1.0 / q;
  const double ir = std::max(ip, iq) - std::min(ip, iq);
  ord.r = (ir == 0.0) ? kInf : 1.0 / ir;
  ord.p_dual = conjugate_exponent(p);
  ord.q_dual = conjugate_exponent(q);
  ord.r_dual = conjugate_exponent(ord.r);
  return ord;
}

inline NormOrder dual_order(const NormOrder& ord) { return make_order(ord.p_dual, ord.q_dual); }

}  // namespace ncnorm
