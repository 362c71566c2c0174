#pragma once

// Three-reference-point nonlinear normalization of objective values.
//
// A GMap sends the best-known value f- to +1, the median random-search run
// best f° to 0 and the median of uniform samples f+ to -1, using a
// logarithmic map whose shape parameter alpha is fixed by the middle anchor.

#include <optional>

namespace gbench {

inline constexpr double kSingularityHalfWidth = 1e-3;
// Guard band for the middle-anchor grade; only extreme ratios are affected.
inline constexpr double kRhoClamp = 1e-12;
inline constexpr double kLogArgumentFloor = 1e-12;

struct ReferencePoints {
  double f_minus = 0.0;
  double f_circ = 0.0;
  double f_plus = 0.0;

  /// Throws Error(DegenerateReferences) unless all values are finite and
  /// f_minus < f_circ < f_plus.
  void validate() const;
};

/// (f - f-) / (f+ - f-), unclamped.
double linear_grade(double f, const ReferencePoints& refs);

/// Shape parameter for a raw middle-anchor grade. Returns nullopt for the
/// linear map used within kSingularityHalfWidth of 0.5.
std::optional<double> alpha_for(double rho_circ);

struct GValue {
  double value = 0.0;
  bool extrapolated = false;
};

class GMap {
 public:
  explicit GMap(const ReferencePoints& refs);

  const ReferencePoints& refs() const noexcept { return refs_; }
  /// Middle-anchor grade after clamping to [kRhoClamp, 1 - kRhoClamp].
  double rho_circ() const noexcept { return rho_circ_; }
  std::optional<double> alpha() const noexcept { return alpha_; }
  bool is_linear() const noexcept { return !alpha_.has_value(); }

  GValue evaluate(double f) const;
  double operator()(double f) const { return evaluate(f).value; }

  /// Same map with f- lowered to new_f_minus; alpha is recomputed.
  GMap rebase(double new_f_minus) const;

 private:
  ReferencePoints refs_;
  double rho_circ_ = 0.5;
  std::optional<double> alpha_;
  // Where the log argument reaches the floor, and the tangent there. The
  // floor is kLogArgumentFloor, lowered below alpha when alpha is tiny.
  double floor_ = kLogArgumentFloor;
  double edge_rho_ = 0.0;
  double edge_value_ = 0.0;
  double edge_slope_ = 0.0;
};

double g_value(double f, const GMap& map);
GMap rebase(const GMap& map, double new_f_minus);

}  // namespace gbench
