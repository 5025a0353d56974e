#pragma once

// Deterministic counter-based randomness (splitmix64 + Box-Muller) and the
// random instance generators used by tests and check suites.  No global
// state: every stream is a pure function of (seed, counter).

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "ncnorm/matrix.hpp"

namespace ncnorm {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : key_(splitmix64(seed ^ 0x5851f42d4c957f2dull)) {}

  // Uniform in [0, 1).
  double uniform() {
    const std::uint64_t z = splitmix64(key_ + 0x9e3779b97f4a7c15ull * ++counter_);
    return static_cast<double>(z >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 6.283185307179586476925286766559 * u2;
    spare_ = rad * std::sin(ang);
    have_spare_ = true;
    return rad * std::cos(ang);
  }

  Complex cnormal() { return Complex(normal(), normal()); }

  std::uint64_t integer() { return splitmix64(key_ + 0x9e3779b97f4a7c15ull * ++counter_); }

  // Independent stream derived from this generator's seed; prefix-stable in
  // the stream index (used for optimizer restarts).
  CounterRng derive(std::uint64_t stream) const {
    return CounterRng(splitmix64(key_ ^ (0xb5297a4d3a2da9c5ull * (stream + 1))));
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

inline Matrix random_complex(int d, CounterRng& rng) {
  Matrix G(d, d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) G(i, k) = rng.cnormal();
  return G;
}

inline Matrix random_hermitian(int d, CounterRng& rng) { return herm(random_complex(d, rng)); }

inline Matrix random_psd(int d, CounterRng& rng) {
  Matrix G = random_complex(d, rng);
  return herm(G.adjoint() * G);
}

inline Matrix random_density(int d, CounterRng& rng) {
  Matrix P = random_psd(d, rng);
  return P / P.trace().real();
}

// Diagonal PSD with entries uniform in (0, 1]; strictly positive so closed
// forms with negative exponents stay finite.
inline Matrix random_diagonal_psd(int d, CounterRng& rng) {
  Matrix D = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) D(i, i) = 1.0 - rng.uniform();
  return D;
}

inline Matrix random_unitary_sign(int d, CounterRng& rng) {
  Matrix D = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) D(i, i) = (rng.integer() & 1) ? -1.0 : 1.0;
  return D;
}

enum class InstanceKind { hermitian, psd, density, diagonal_psd, unitary_sign };

inline InstanceKind parse_kind(const std::string& s) {
  if (s == "hermitian") return InstanceKind::hermitian;
  if (s == "psd") return InstanceKind::psd;
  if (s == "density") return InstanceKind::density;
  if (s == "diagonal-psd") return InstanceKind::diagonal_psd;
  if (s == "unitary-sign") return InstanceKind::unitary_sign;
  throw std::invalid_argument("unknown instance kind: " + s);
}

inline BipartiteOp random_instance(InstanceKind kind, int n, int m, std::uint64_t seed) {
  CounterRng rng(seed);
  const int d = n * m;
  Matrix M;
  switch (kind) {
    case InstanceKind::hermitian: M = random_hermitian(d, rng); break;
    case InstanceKind::psd: M = random_psd(d, rng); break;
    case InstanceKind::density: M = random_density(d, rng); break;
    case InstanceKind::diagonal_psd: M = random_diagonal_psd(d, rng); break;
    case InstanceKind::unitary_sign: M = random_unitary_sign(d, rng); break;
    default: throw std::invalid_argument("unknown instance kind");
  }
  return BipartiteOp(n, m, std::move(M));
}

inline BipartiteOp random_instance(const std::string& kind, int n, int m, std::uint64_t seed) {
  return random_instance(parse_kind(kind), n, m, seed);
}

// Haar-ish random unitary from the QR decomposition of a Gaussian matrix.
inline Matrix random_unitary(int d, CounterRng& rng) {
  Matrix G = random_complex(d, rng);
  Eigen::HouseholderQR<Matrix> qr(G);
  Matrix Q = qr.householderQ();
  Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i) {
    Complex rii = R(i, i);
    Complex phase = (std::abs(rii) > 0) ? rii / std::abs(rii) : Complex(1, 0);
    Q.col(i) *= phase;
  }
  return Q;
}

}  // namespace ncnorm
