#pragma once

#include <array>

namespace vpg::dynamics {

/// Control points of the normalized friction curve: origin, peak, asymptote.
/// Slip is dimensionless, force is normalized (scaled by wheel load later).
struct SplineControlPoints {
  double s0 = 0.0, f0 = 0.0;   // origin
  double se = 0.2, fe = 1.0;   // extremum (peak)
  double sa = 0.6, fa = 0.75;  // asymptote
};

/// Two-piece cubic friction curve f_k(S) = a_k S^3 + b_k S^2 + c_k S + d_k.
///
/// Piece 0 runs from the origin to the extremum with a free start slope of
/// 2*(fe-f0)/(se-s0) and zero slope at the peak; piece 1 runs from the peak
/// to the asymptote with zero slope at both ends. Beyond `sa` the curve is
/// extrapolated flat at `fa`.
class TireSpline {
 public:
  struct Cubic {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
    double eval(double s) const { return ((a * s + b) * s + c) * s + d; }
    double slope(double s) const { return (3.0 * a * s + 2.0 * b) * s + c; }
  };

  /// Fits the two pieces from control points. Throws InvalidParameterError
  /// unless s0 < se < sa.
  static TireSpline fit(const SplineControlPoints& pts);

  /// Normalized force at slip magnitude s (s >= 0 expected).
  double value(double s) const;

  /// dF/dS at slip magnitude s (0 beyond the asymptote).
  double slope(double s) const;

  const Cubic& piece0() const { return pieces_[0]; }
  const Cubic& piece1() const { return pieces_[1]; }
  const SplineControlPoints& points() const { return pts_; }

 private:
  std::array<Cubic, 2> pieces_{};
  SplineControlPoints pts_{};
};

/// Signed tire force: sign(slip) * F(|slip|) * normal_load * traction_scale,
/// flat at the asymptote value beyond `sa`.
double tire_force(const TireSpline& spline, double slip, double normal_load,
                  double traction_scale = 1.0);

}  // namespace vpg::dynamics
