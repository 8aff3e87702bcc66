#pragma once

namespace dq {

struct HalfPlanePoint {
  double re = 0;
  double im = 0;
};

// Differential of the mirror-charge angle phi(z, w) = (1/2pi) arg((w-z)/(w-zbar))
// for one edge, split by which end each component differentiates.  z is the
// eta end (tail) and w the X end (head); the whole form dies as the tail
// approaches the real axis, which realizes the Dirichlet condition there.
struct EdgeForm {
  double d_tail_x = 0;
  double d_tail_y = 0;
  double d_head_x = 0;
  double d_head_y = 0;
};

double angle(const HalfPlanePoint& z, const HalfPlanePoint& w);
EdgeForm angle_form(const HalfPlanePoint& z, const HalfPlanePoint& w);

}  // namespace dq
