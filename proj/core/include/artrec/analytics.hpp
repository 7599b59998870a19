#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>

#include <nlohmann/json.hpp>

#include "artrec/curation.hpp"
#include "artrec/session.hpp"

namespace artrec {

/// negative/neutral -> positive, or negative -> neutral.
constexpr bool is_improvement(Valence pre, Valence post) noexcept {
  return (post == Valence::Positive && pre != Valence::Positive) ||
         (pre == Valence::Negative && post == Valence::Neutral);
}

struct MoodTransition {
  Valence pre_valence = Valence::Neutral;
  Valence post_valence = Valence::Neutral;
  bool improved = false;
};

MoodTransition mood_transition(const PamResponse& pre, const PamResponse& post);

/// Proportions indexed by Valence. Each margin sums to 1.
struct MoodTable {
  std::size_t n = 0;
  std::array<double, 3> pre{};
  std::array<double, 3> post{};
  std::array<std::array<double, 3>, 3> joint{};  // [pre][post]
  double improved = 0.0;
};

struct MoodSummary {
  std::optional<MoodTable> pooled;  // absent for empty input
  std::map<Arm, MoodTable> per_arm;
};

struct PanasDelta {
  std::array<int, kPanasItemCount> per_item{};  // post - pre, indexed by PanasItem
  int positive_sum_delta = 0;
  int negative_sum_delta = 0;
};

PanasDelta panas_delta(const PanasResponse& pre, const PanasResponse& post);

struct PanasGroupSummary {
  std::size_t n = 0;
  std::array<double, kPanasItemCount> median_delta{};
  std::array<double, kPanasItemCount> mean_delta{};
  double median_positive_sum_delta = 0.0;
  double median_negative_sum_delta = 0.0;
  double mean_positive_sum_delta = 0.0;
  double mean_negative_sum_delta = 0.0;
};

struct PanasSummary {
  std::optional<PanasGroupSummary> pooled;
  std::map<Arm, PanasGroupSummary> per_arm;
};

struct Descriptive {
  std::size_t n = 0;
  double mean = 0.0;
  double median = 0.0;
  double sd = 0.0;  // population
};

struct RatingGroupSummary {
  std::size_t n = 0;
  std::array<Descriptive, 6> per_dimension{};  // indexed by QualityDimension
};

struct RatingSummary {
  std::optional<RatingGroupSummary> pooled;
  std::map<Arm, RatingGroupSummary> per_arm;  // arms without sessions are absent
};

Descriptive describe(std::span<const double> xs);

// Each summary throws IncompleteSession(id) when a session lacks the
// instrument it aggregates.
MoodSummary mood_summary(std::span<const GuidedSession> sessions);
PanasSummary panas_summary(std::span<const GuidedSession> sessions);
RatingSummary rating_summary(std::span<const GuidedSession> sessions);

nlohmann::json to_json(const MoodSummary& summary);
nlohmann::json to_json(const PanasSummary& summary);
nlohmann::json to_json(const RatingSummary& summary);

}  // namespace artrec
