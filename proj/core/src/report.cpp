#include "artrec/report.hpp"

#include <cstdio>

namespace artrec {

const std::vector<std::string>& session_csv_columns() {
  static const std::vector<std::string> columns = [] {
    std::vector<std::string> c = {"session_id",   "curation_ref",    "seed_id",       "arm",
                                  "pre_pam_mood", "pre_pam_valence", "post_pam_mood", "post_pam_valence"};
    for (const char* phase : {"pre_", "post_"}) {
      for (PanasItem item : kPanasItems) c.push_back(phase + std::string(to_string(item)));
    }
    for (QualityDimension d : kQualityDimensions) c.emplace_back(to_string(d));
    c.insert(c.end(), {"reflection_count", "reflection_sentiments", "complete"});
    return c;
  }();
  return columns;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

namespace {

std::string format_confidence(double c) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", c);
  return buf;
}

void add_pam(std::vector<std::string>& row, const std::optional<InstrumentBundle>& b) {
  if (b && b->pam) {
    row.emplace_back(to_string(b->pam->mood));
    row.emplace_back(to_string(b->pam->valence()));
  } else {
    row.insert(row.end(), 2, "");
  }
}

void add_panas(std::vector<std::string>& row, const std::optional<InstrumentBundle>& b) {
  for (PanasItem item : kPanasItems) {
    row.push_back(b && b->panas ? std::to_string((*b->panas)[item]) : "");
  }
}

}  // namespace

std::string export_sessions_csv(std::span<const GuidedSession> sessions, const SentimentClassifier* classifier) {
  std::string out;
  const auto& columns = session_csv_columns();
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out += ',';
    out += columns[i];
  }
  out += '\n';

  for (const auto& s : sessions) {
    std::vector<std::string> row = {s.session_id(), s.curation_ref(), s.seed_id(), std::string(to_string(s.arm()))};
    add_pam(row, s.pre());
    add_pam(row, s.post());
    add_panas(row, s.pre());
    add_panas(row, s.post());
    for (QualityDimension d : kQualityDimensions) {
      row.push_back(s.ratings() ? std::to_string((*s.ratings())[d]) : "");
    }
    row.push_back(std::to_string(s.reflections().size()));
    std::string sentiments;
    if (classifier) {
      for (const auto& painting : s.paintings()) {
        auto it = s.reflections().find(painting);
        if (it == s.reflections().end()) continue;
        const SentimentLabel label = classify_sentiment(it->second, *classifier);
        if (!sentiments.empty()) sentiments += ';';
        sentiments += painting + "=" + std::string(to_string(label.label)) + ":" + format_confidence(label.confidence);
      }
    }
    row.push_back(std::move(sentiments));
    row.push_back(s.is_complete() ? "true" : "false");

    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_escape(row[i]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace artrec
