#include "gbench/metric.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "gbench/error.hpp"

namespace gbench {

void ReferencePoints::validate() const {
  if (!std::isfinite(f_minus) || !std::isfinite(f_circ) || !std::isfinite(f_plus)) {
    throw Error(ErrorKind::DegenerateReferences,
                fmt::format("non-finite reference ({}, {}, {})", f_minus, f_circ, f_plus));
  }
  if (!(f_minus < f_circ && f_circ < f_plus)) {
    throw Error(ErrorKind::DegenerateReferences,
                fmt::format("references not strictly ordered ({}, {}, {})", f_minus, f_circ, f_plus));
  }
}

double linear_grade(double f, const ReferencePoints& refs) {
  if (!std::isfinite(f)) {
    throw Error(ErrorKind::InvalidInput, fmt::format("non-finite objective value {}", f));
  }
  return (f - refs.f_minus) / (refs.f_plus - refs.f_minus);
}

std::optional<double> alpha_for(double rho_circ) {
  if (!(rho_circ > 0.0 && rho_circ < 1.0)) {
    throw Error(ErrorKind::DegenerateReferences,
                fmt::format("middle-anchor grade {} outside (0, 1)", rho_circ));
  }
  const double rho = std::clamp(rho_circ, kRhoClamp, 1.0 - kRhoClamp);
  if (std::abs(rho - 0.5) < kSingularityHalfWidth) {
    return std::nullopt;
  }
  // With b = sqrt(alpha), G(f°) = 0 reads rho*b^2 - b + 1 - rho = 0, whose
  // roots are 1 and (1 - rho) / rho. The nontrivial one is the plus branch
  // below 0.5 and the minus branch above it; this form avoids cancellation.
  const double beta = (1.0 - rho) / rho;
  return beta * beta;
}

GMap::GMap(const ReferencePoints& refs) : refs_(refs) {
  refs_.validate();
  const double low_gap = refs_.f_circ - refs_.f_minus;
  const double high_gap = refs_.f_plus - refs_.f_circ;
  rho_circ_ = std::clamp(low_gap / (low_gap + high_gap), kRhoClamp, 1.0 - kRhoClamp);
  alpha_ = alpha_for(rho_circ_);
  if (alpha_) {
    // Gap ratio taken directly so alpha keeps full precision near rho = 1.
    const double beta = std::clamp(high_gap / low_gap, kRhoClamp / (1.0 - kRhoClamp),
                                   (1.0 - kRhoClamp) / kRhoClamp);
    alpha_ = beta * beta;
    const double a = *alpha_;
    const double log_a = std::log(a);
    floor_ = std::min(kLogArgumentFloor, 0.5 * a);
    edge_rho_ = (1.0 - floor_) / (1.0 - a);
    edge_value_ = 1.0 - 2.0 * std::log(floor_) / log_a;
    edge_slope_ = -2.0 * (a - 1.0) / (floor_ * log_a);
  }
}

GValue GMap::evaluate(double f) const {
  const double rho = linear_grade(f, refs_);
  if (!alpha_) {
    // Linear in rho on each side of f°, so all three anchors stay exact; at
    // rho° = 0.5 this is 1 - 2 rho.
    if (rho <= rho_circ_) return {1.0 - rho / rho_circ_, false};
    return {-(rho - rho_circ_) / (1.0 - rho_circ_), false};
  }
  const double a = *alpha_;
  // rho * (a - 1) + 1 written as (1 - rho) + rho * a, with 1 - rho measured
  // from f+ so neither term cancels on the reference interval.
  const double upper = (refs_.f_plus - f) / (refs_.f_plus - refs_.f_minus);
  const double arg = upper + rho * a;
  if (arg > floor_) {
    return {1.0 - 2.0 * std::log(arg) / std::log(a), false};
  }
  return {edge_value_ + edge_slope_ * (rho - edge_rho_), true};
}

GMap GMap::rebase(double new_f_minus) const {
  if (!std::isfinite(new_f_minus) || new_f_minus > refs_.f_minus) {
    throw Error(ErrorKind::InvalidInput,
                fmt::format("rebase to {} above current best {}", new_f_minus, refs_.f_minus));
  }
  if (new_f_minus >= refs_.f_circ) {
    throw Error(ErrorKind::DegenerateReferences,
                fmt::format("rebase to {} not below f_circ {}", new_f_minus, refs_.f_circ));
  }
  ReferencePoints refs = refs_;
  refs.f_minus = new_f_minus;
  return GMap(refs);
}

double g_value(double f, const GMap& map) { return map(f); }

GMap rebase(const GMap& map, double new_f_minus) { return map.rebase(new_f_minus); }

}  // namespace gbench
