#pragma once

#include <span>
#include <string>
#include <vector>

#include "artrec/sentiment.hpp"
#include "artrec/session.hpp"

namespace artrec {

/// Column order of the per-session CSV export:
///
///   session_id, curation_ref, seed_id, arm,
///   pre_pam_mood, pre_pam_valence, post_pam_mood, post_pam_valence,
///   pre_<item> x10, post_<item> x10     (PANAS, items in canonical order)
///   accuracy, diversity, novelty, serendipity, immersion, engagement,
///   reflection_count, reflection_sentiments, complete
///
/// reflection_sentiments is `painting_id=label:confidence` joined by `;` in
/// painting order. Missing values are empty cells.
const std::vector<std::string>& session_csv_columns();

/// Header line plus one row per session. When `classifier` is null the
/// sentiment column is left empty.
std::string export_sessions_csv(std::span<const GuidedSession> sessions, const SentimentClassifier* classifier);

/// RFC 4180 quoting when the field contains a comma, quote or newline.
std::string csv_escape(std::string_view field);

}  // namespace artrec
