#include "dq/halfplane.hpp"

#include <cmath>

#include "dq/error.hpp"

namespace dq {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_domain(const HalfPlanePoint& z, const HalfPlanePoint& w) {
  if (z.im < 0 || w.im < 0) throw Error("point below the real axis");
  if (z.im == 0 && w.im == 0) throw Error("both propagator ends on the axis");
  double dx = w.re - z.re, dy = w.im - z.im;
  if (dx * dx + dy * dy == 0) throw Error("coincident propagator ends");
}

}  // namespace

double angle(const HalfPlanePoint& z, const HalfPlanePoint& w) {
  check_domain(z, w);
  double a = std::atan2(w.im - z.im, w.re - z.re);
  double b = std::atan2(w.im + z.im, w.re - z.re);
  return (a - b) / (2 * kPi);
}

EdgeForm angle_form(const HalfPlanePoint& z, const HalfPlanePoint& w) {
  check_domain(z, w);
  double dx = w.re - z.re;
  double dm = w.im - z.im;   // head minus tail
  double dp = w.im + z.im;   // head minus mirrored tail
  double r2 = dx * dx + dm * dm;
  double s2 = dx * dx + dp * dp;
  double c = 1.0 / (2 * kPi);
  EdgeForm f;
  f.d_head_x = c * (-dm / r2 + dp / s2);
  f.d_head_y = c * (dx / r2 - dx / s2);
  f.d_tail_x = c * (dm / r2 - dp / s2);
  f.d_tail_y = c * (-dx / r2 - dx / s2);
  return f;
}

}  // namespace dq
