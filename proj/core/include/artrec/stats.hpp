#pragma once

#include <span>

namespace artrec::stats {

// Empty input yields 0.0 for all three; callers decide whether to report it.
double mean(std::span<const double> xs);
/// Average of the two middle values for even counts.
double median(std::span<const double> xs);
/// Population standard deviation (divisor n).
double population_sd(std::span<const double> xs);

}  // namespace artrec::stats
