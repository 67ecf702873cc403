#include "p3p.hpp"

#include <cmath>
#include <complex>

namespace screloc::detail {
namespace {

// A few Newton steps on the quartic; returns the iterate with the smallest
// residual so a diverging spurious root cannot get worse than its seed.
double polish_quartic_root(const std::array<double, 5>& c, double x) {
  auto eval = [&c](double v) {
    return (((c[0] * v + c[1]) * v + c[2]) * v + c[3]) * v + c[4];
  };
  double best = x;
  double best_abs = std::abs(eval(x));
  for (int it = 0; it < 8; ++it) {
    const double f = eval(x);
    const double df = ((4.0 * c[0] * x + 3.0 * c[1]) * x + 2.0 * c[2]) * x + c[3];
    if (std::abs(df) < 1e-30) break;
    x -= f / df;
    if (!std::isfinite(x)) break;
    const double fx = std::abs(eval(x));
    if (fx < best_abs) {
      best_abs = fx;
      best = x;
    }
  }
  return best;
}

}  // namespace

std::vector<double> solve_quartic_real(const std::array<double, 5>& c) {
  std::vector<double> roots;
  const double A = c[0];
  if (A == 0.0) return roots;  // callers guarantee a true quartic
  const double B = c[1];
  const double C = c[2];
  const double D = c[3];
  const double E = c[4];

  // Ferrari's method on the depressed quartic, resolvent handled in complex
  // arithmetic. Spurious candidates (real parts of complex-conjugate pairs)
  // are returned too — P3P backsubstitution weeds them out geometrically.
  const double A2 = A * A;
  const double B2 = B * B;
  const double A3 = A2 * A;
  const double B3 = B2 * B;
  const double A4 = A3 * A;
  const double B4 = B3 * B;

  const double alpha = -3.0 * B2 / (8.0 * A2) + C / A;
  const double beta = B3 / (8.0 * A3) - B * C / (2.0 * A2) + D / A;
  const double gamma =
      -3.0 * B4 / (256.0 * A4) + B2 * C / (16.0 * A3) - B * D / (4.0 * A2) + E / A;

  const std::complex<double> P(-alpha * alpha / 12.0 - gamma, 0.0);
  const std::complex<double> Q(
      -alpha * alpha * alpha / 108.0 + alpha * gamma / 3.0 - beta * beta / 8.0, 0.0);
  const std::complex<double> R =
      -Q / 2.0 + std::sqrt(Q * Q / 4.0 + P * P * P / 27.0);

  const std::complex<double> U = std::pow(R, 1.0 / 3.0);
  std::complex<double> y;
  if (U.real() == 0.0 && U.imag() == 0.0) {
    y = -5.0 * alpha / 6.0 - std::pow(Q, 1.0 / 3.0);
  } else {
    y = -5.0 * alpha / 6.0 - P / (3.0 * U) + U;
  }

  const std::complex<double> w = std::sqrt(alpha + 2.0 * y);
  const double shift = -B / (4.0 * A);

  const std::complex<double> inner_p =
      std::sqrt(-(3.0 * alpha + 2.0 * y + 2.0 * beta / w));
  const std::complex<double> inner_m =
      std::sqrt(-(3.0 * alpha + 2.0 * y - 2.0 * beta / w));

  const std::array<std::complex<double>, 4> cand = {
      shift + 0.5 * (w + inner_p),
      shift + 0.5 * (w - inner_p),
      shift + 0.5 * (-w + inner_m),
      shift + 0.5 * (-w - inner_m),
  };

  for (const auto& x : cand) {
    if (!std::isfinite(x.real())) continue;
    roots.push_back(polish_quartic_root(c, x.real()));
  }
  return roots;
}

std::vector<RigidWorldToCam> solve_p3p(const std::array<Vec3, 3>& rays,
                                       const std::array<Vec3, 3>& points) {
  std::vector<RigidWorldToCam> solutions;

  Vec3 P1 = points[0];
  Vec3 P2 = points[1];
  Vec3 P3 = points[2];

  // Collinear world points span no plane: reject.
  if (((P2 - P1).cross(P3 - P1)).squaredNorm() < 1e-18) return solutions;

  Vec3 f1 = rays[0];
  Vec3 f2 = rays[1];
  Vec3 f3 = rays[2];

  // Intermediate camera frame T aligned with f1 and the (f1, f2) plane.
  Vec3 e1 = f1;
  Vec3 e3 = f1.cross(f2);
  const double e3_norm = e3.norm();
  if (e3_norm < 1e-12) return solutions;  // parallel bearing vectors
  e3 /= e3_norm;
  Vec3 e2 = e3.cross(e1);

  Mat3 T;
  T.row(0) = e1;
  T.row(1) = e2;
  T.row(2) = e3;

  Vec3 f3t = T * f3;

  // Kneip's parameterization needs f3 in the half-space with negative z;
  // swapping the first two correspondences flips it there.
  if (f3t.z() > 0.0) {
    std::swap(f1, f2);
    std::swap(P1, P2);
    e1 = f1;
    e3 = f1.cross(f2).normalized();
    e2 = e3.cross(e1);
    T.row(0) = e1;
    T.row(1) = e2;
    T.row(2) = e3;
    f3t = T * f3;
  }

  // Intermediate world frame N anchored at P1 with x towards P2.
  Vec3 n1 = P2 - P1;
  const double d12 = n1.norm();
  if (d12 < 1e-12) return solutions;
  n1 /= d12;
  Vec3 n3 = n1.cross(P3 - P1);
  const double n3_norm = n3.norm();
  if (n3_norm < 1e-12) return solutions;
  n3 /= n3_norm;
  Vec3 n2 = n3.cross(n1);

  Mat3 N;
  N.row(0) = n1;
  N.row(1) = n2;
  N.row(2) = n3;

  const Vec3 P3n = N * (P3 - P1);
  const double p1 = P3n.x();
  const double p2 = P3n.y();

  const double f3z = f3t.z();
  if (std::abs(f3z) < 1e-15) return solutions;
  const double phi1 = f3t.x() / f3z;
  const double phi2 = f3t.y() / f3z;

  const double cos_beta = f1.dot(f2);
  double b = 1.0 / (1.0 - cos_beta * cos_beta) - 1.0;
  if (b < 0.0) b = 0.0;
  b = cos_beta < 0.0 ? -std::sqrt(b) : std::sqrt(b);

  // Quartic in cos(theta), coefficients straight from Kneip's derivation.
  const double phi1_pw2 = phi1 * phi1;
  const double phi2_pw2 = phi2 * phi2;
  const double p1_pw2 = p1 * p1;
  const double p1_pw3 = p1_pw2 * p1;
  const double p1_pw4 = p1_pw3 * p1;
  const double p2_pw2 = p2 * p2;
  const double p2_pw3 = p2_pw2 * p2;
  const double p2_pw4 = p2_pw3 * p2;
  const double d12_pw2 = d12 * d12;
  const double b_pw2 = b * b;

  std::array<double, 5> factors;
  factors[0] = -phi2_pw2 * p2_pw4 - p2_pw4 * phi1_pw2 - p2_pw4;

  factors[1] = 2.0 * p2_pw3 * d12 * b + 2.0 * phi2_pw2 * p2_pw3 * d12 * b -
               2.0 * phi2 * p2_pw3 * phi1 * d12;

  factors[2] = -phi2_pw2 * p2_pw2 * p1_pw2 - phi2_pw2 * p2_pw2 * d12_pw2 * b_pw2 -
               phi2_pw2 * p2_pw2 * d12_pw2 + phi2_pw2 * p2_pw4 +
               p2_pw4 * phi1_pw2 + 2.0 * p1 * p2_pw2 * d12 +
               2.0 * phi1 * phi2 * p1 * p2_pw2 * d12 * b -
               p2_pw2 * p1_pw2 * phi1_pw2 + 2.0 * p1 * p2_pw2 * phi2_pw2 * d12 -
               p2_pw2 * d12_pw2 * b_pw2 - 2.0 * p1_pw2 * p2_pw2;

  factors[3] = 2.0 * p1_pw2 * p2 * d12 * b + 2.0 * phi2 * p2_pw3 * phi1 * d12 -
               2.0 * phi2_pw2 * p2_pw3 * d12 * b - 2.0 * p1 * p2 * d12_pw2 * b;

  factors[4] = -2.0 * phi2 * p2_pw2 * phi1 * p1 * d12 * b +
               phi2_pw2 * p2_pw2 * d12_pw2 + 2.0 * p1_pw3 * d12 -
               p1_pw2 * d12_pw2 + phi2_pw2 * p2_pw2 * p1_pw2 - p1_pw4 -
               2.0 * phi2_pw2 * p2_pw2 * p1 * d12 +
               p2_pw2 * phi1_pw2 * p1_pw2 + phi2_pw2 * p2_pw2 * d12_pw2 * b_pw2;

  const std::vector<double> roots = solve_quartic_real(factors);

  for (double cos_theta : roots) {
    if (std::abs(cos_theta) > 1.0) {
      if (std::abs(cos_theta) > 1.0 + 1e-8) continue;
      cos_theta = cos_theta > 0.0 ? 1.0 : -1.0;
    }

    const double denom_a =
        ((-phi1 * cos_theta * p2) / phi2 + p1 - d12);
    if (std::abs(denom_a) < 1e-15) continue;
    const double cot_alpha =
        ((-phi1 * p1) / phi2 - cos_theta * p2 + d12 * b) / denom_a;

    const double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
    double sin_alpha = std::sqrt(1.0 / (cot_alpha * cot_alpha + 1.0));
    double cos_alpha = std::sqrt(std::max(0.0, 1.0 - sin_alpha * sin_alpha));
    if (cot_alpha < 0.0) cos_alpha = -cos_alpha;

    const double scale = sin_alpha * b + cos_alpha;

    // Camera center in the intermediate world frame N.
    const Vec3 C_nu(d12 * cos_alpha * scale,
                    cos_theta * d12 * sin_alpha * scale,
                    sin_theta * d12 * sin_alpha * scale);

    Mat3 Q;
    Q << -cos_alpha, -sin_alpha * cos_theta, -sin_alpha * sin_theta,
         sin_alpha, -cos_alpha * cos_theta, -cos_alpha * sin_theta,
         0.0,       -sin_theta,              cos_theta;

    RigidWorldToCam sol;
    sol.R = T.transpose() * Q * N;
    sol.t = -sol.R * (P1 + N.transpose() * C_nu);
    if (!sol.R.allFinite() || !sol.t.allFinite()) continue;
    solutions.push_back(sol);
  }

  return solutions;
}

}  // namespace screloc::detail
