#include "dqplate/series_reference.hpp"

#include "dqplate/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <vector>

namespace dqplate {

namespace {

constexpr double pi = std::numbers::pi;

// Sums over odd k >= 1 with g_k = k pi / len:
//   s1 = sum 1 / (alpha^2 + g_k^2)^2,   s2 = sum g_k^2 / (alpha^2 + g_k^2)^2.
// From S(alpha) = sum 1 / (alpha^2 + g^2) = len tanh(alpha len / 2) / (4 alpha).
struct OddSums {
  double s1;
  double s2;
};

OddSums odd_sums(double alpha, double len) {
  const double z = 0.5 * alpha * len;
  const double th = std::tanh(z);
  const double sech2 = 1.0 - th * th;
  const double s = len * th / (4.0 * alpha);
  const double ds = len / 4.0 * (0.5 * len * sech2 / alpha - th / (alpha * alpha));
  const double s1 = -ds / (2.0 * alpha);
  return {s1, s - alpha * alpha * s1};
}

}  // namespace

double linear_center_coefficient(BcKind bc, double aspect_b_over_a, std::size_t terms) {
  if (!(aspect_b_over_a > 0.0)) throw InvalidArgument("aspect ratio must be positive");
  if (terms < 1) throw InvalidArgument("need at least one series term");
  // Unit D and q; plate [0, a] x [0, b] with a = 1.
  const double a = 1.0;
  const double b = aspect_b_over_a;
  const auto k = static_cast<Eigen::Index>(terms);
  std::vector<double> alpha(terms), gamma(terms), odd(terms);
  for (std::size_t i = 0; i < terms; ++i) {
    odd[i] = 2.0 * static_cast<double>(i) + 1.0;
    alpha[i] = odd[i] * pi / a;
    gamma[i] = odd[i] * pi / b;
  }

  // Edge curvature w_yy on y = 0, b is sum c_m sin(alpha_m x); w_xx on x = 0, a
  // is sum d_n sin(gamma_n y). Boundary terms from integrating by parts give
  //   (alpha^2 + gamma^2)^2 w_mn = q_mn - 4 gamma_n c_m / b - 4 alpha_m d_n / a.
  Eigen::VectorXd c = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd d = Eigen::VectorXd::Zero(k);
  if (bc == BcKind::clamped) {
    Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(2 * k, 2 * k);
    Eigen::VectorXd rhs(2 * k);
    for (Eigen::Index m = 0; m < k; ++m) {
      // sum_n gamma_n w_mn = 0 (slope on the y edges), n unbounded.
      const auto sm = odd_sums(alpha[m], b);
      rhs(m) = 16.0 / (pi * pi * odd[m]) * (pi / b) * sm.s1;
      sys(m, m) += 4.0 / b * sm.s2;
      for (Eigen::Index n = 0; n < k; ++n) {
        const double den = alpha[m] * alpha[m] + gamma[n] * gamma[n];
        sys(m, k + n) += 4.0 * alpha[m] / a * gamma[n] / (den * den);
      }
    }
    for (Eigen::Index n = 0; n < k; ++n) {
      // sum_m alpha_m w_mn = 0 (slope on the x edges), m unbounded.
      const auto sn = odd_sums(gamma[n], a);
      rhs(k + n) = 16.0 / (pi * pi * odd[n]) * (pi / a) * sn.s1;
      sys(k + n, k + n) += 4.0 / a * sn.s2;
      for (Eigen::Index m = 0; m < k; ++m) {
        const double den = alpha[m] * alpha[m] + gamma[n] * gamma[n];
        sys(k + n, m) += 4.0 * gamma[n] / b * alpha[m] / (den * den);
      }
    }
    const Eigen::VectorXd sol = sys.partialPivLu().solve(rhs);
    c = sol.head(k);
    d = sol.tail(k);
  }

  // Center value; sin(odd pi / 2) alternates in sign.
  const std::size_t outer = 4 * terms;
  double w = 0.0;
  for (std::size_t m = 0; m < outer; ++m) {
    const double om = 2.0 * static_cast<double>(m) + 1.0;
    const double am = om * pi / a;
    const double sm = (m % 2 == 0) ? 1.0 : -1.0;
    for (std::size_t n = 0; n < outer; ++n) {
      const double on = 2.0 * static_cast<double>(n) + 1.0;
      const double gn = on * pi / b;
      const double sn = (n % 2 == 0) ? 1.0 : -1.0;
      const double den = am * am + gn * gn;
      double num = 16.0 / (pi * pi * om * on);
      if (m < terms) num -= 4.0 * gn * c(static_cast<Eigen::Index>(m)) / b;
      if (n < terms) num -= 4.0 * am * d(static_cast<Eigen::Index>(n)) / a;
      w += sm * sn * num / (den * den);
    }
  }
  return w;
}

}  // namespace dqplate
