#pragma once

#include <optional>
#include <span>
#include <vector>

namespace gbench::stats {

/// Sample median; even-sized samples average the two central order statistics.
double median(std::span<const double> values);

/// Empirical quantile function over already sorted values, linear
/// interpolation between order statistics at position p * (n - 1).
double quantile_sorted(std::span<const double> sorted, double p);
double quantile(std::span<const double> values, double p);

double mean(std::span<const double> values);
/// Population standard deviation.
double stddev(std::span<const double> values);

/// Pearson correlation; nullopt when either variable has zero variance or
/// fewer than two pairs are given.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

}  // namespace gbench::stats
