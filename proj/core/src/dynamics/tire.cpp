#include "vpg/dynamics/tire.hpp"

#include <cmath>

#include "vpg/common/errors.hpp"

namespace vpg::dynamics {

namespace {

/// Cubic through (x0,y0) slope m0 and (x1,y1) slope m1, in monomial form.
TireSpline::Cubic hermite(double x0, double y0, double m0, double x1, double y1, double m1) {
  const double h = x1 - x0;
  // Coefficients in the local variable u = x - x0.
  const double c0 = y0;
  const double c1 = m0;
  const double c2 = (3.0 * (y1 - y0) / h - 2.0 * m0 - m1) / h;
  const double c3 = (2.0 * (y0 - y1) / h + m0 + m1) / (h * h);
  // Expand to powers of x.
  TireSpline::Cubic out;
  out.a = c3;
  out.b = c2 - 3.0 * c3 * x0;
  out.c = c1 - 2.0 * c2 * x0 + 3.0 * c3 * x0 * x0;
  out.d = c0 - c1 * x0 + c2 * x0 * x0 - c3 * x0 * x0 * x0;
  return out;
}

}  // namespace

TireSpline TireSpline::fit(const SplineControlPoints& pts) {
  if (!(pts.s0 < pts.se && pts.se < pts.sa)) {
    throw InvalidParameterError("tire spline control points must satisfy s0 < se < sa");
  }
  TireSpline spline;
  spline.pts_ = pts;
  const double m0 = 2.0 * (pts.fe - pts.f0) / (pts.se - pts.s0);
  spline.pieces_[0] = hermite(pts.s0, pts.f0, m0, pts.se, pts.fe, 0.0);
  spline.pieces_[1] = hermite(pts.se, pts.fe, 0.0, pts.sa, pts.fa, 0.0);
  return spline;
}

double TireSpline::value(double s) const {
  if (s >= pts_.sa) return pts_.fa;
  if (s < pts_.s0) s = pts_.s0;
  return s < pts_.se ? pieces_[0].eval(s) : pieces_[1].eval(s);
}

double TireSpline::slope(double s) const {
  if (s >= pts_.sa || s < pts_.s0) return 0.0;
  return s < pts_.se ? pieces_[0].slope(s) : pieces_[1].slope(s);
}

double tire_force(const TireSpline& spline, double slip, double normal_load,
                  double traction_scale) {
  const double sign = slip < 0.0 ? -1.0 : 1.0;
  return sign * spline.value(std::abs(slip)) * normal_load * traction_scale;
}

}  // namespace vpg::dynamics
