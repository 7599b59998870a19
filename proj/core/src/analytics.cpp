#include "artrec/analytics.hpp"

#include <vector>

#include "artrec/error.hpp"
#include "artrec/stats.hpp"

namespace artrec {

namespace {

std::size_t idx(Valence v) { return static_cast<std::size_t>(v); }

struct MoodCounts {
  std::size_t n = 0;
  std::array<std::array<std::size_t, 3>, 3> joint{};
  std::size_t improved = 0;

  void add(const MoodTransition& t) {
    ++n;
    ++joint[idx(t.pre_valence)][idx(t.post_valence)];
    if (t.improved) ++improved;
  }

  MoodTable table() const {
    MoodTable out;
    out.n = n;
    const double total = static_cast<double>(n);
    for (std::size_t a = 0; a < 3; ++a) {
      for (std::size_t b = 0; b < 3; ++b) {
        const double p = static_cast<double>(joint[a][b]) / total;
        out.joint[a][b] = p;
      }
      std::size_t pre = 0;
      std::size_t post = 0;
      for (std::size_t b = 0; b < 3; ++b) {
        pre += joint[a][b];
        post += joint[b][a];
      }
      out.pre[a] = static_cast<double>(pre) / total;
      out.post[a] = static_cast<double>(post) / total;
    }
    out.improved = static_cast<double>(improved) / total;
    return out;
  }
};

template <class Group, class Build>
void group_by_arm(std::span<const GuidedSession> sessions, std::optional<Group>& pooled,
                  std::map<Arm, Group>& per_arm, Build build) {
  if (sessions.empty()) return;
  std::vector<const GuidedSession*> all;
  std::map<Arm, std::vector<const GuidedSession*>> by_arm;
  for (const auto& s : sessions) {
    all.push_back(&s);
    by_arm[s.arm()].push_back(&s);
  }
  pooled = build(all);
  for (const auto& [arm, group] : by_arm) per_arm.emplace(arm, build(group));
}

void require(bool ok, const GuidedSession& s, const char* what) {
  if (!ok) throw Error(ErrorCode::IncompleteSession, s.session_id() + ": missing " + what);
}

const PanasResponse& pre_panas(const GuidedSession& s) {
  require(s.pre() && s.pre()->panas, s, "pre-session PANAS");
  return *s.pre()->panas;
}

const PanasResponse& post_panas(const GuidedSession& s) {
  require(s.post() && s.post()->panas, s, "post-session PANAS");
  return *s.post()->panas;
}

nlohmann::json valence_object(const std::array<double, 3>& v) {
  nlohmann::json j = nlohmann::json::object();
  for (Valence val : kValences) j[std::string(to_string(val))] = v[idx(val)];
  return j;
}

nlohmann::json to_json(const MoodTable& t) {
  nlohmann::json joint = nlohmann::json::object();
  for (Valence a : kValences) {
    nlohmann::json row = nlohmann::json::object();
    for (Valence b : kValences) row[std::string(to_string(b))] = t.joint[idx(a)][idx(b)];
    joint[std::string(to_string(a))] = std::move(row);
  }
  return {{"n", t.n},
          {"pre", valence_object(t.pre)},
          {"post", valence_object(t.post)},
          {"joint", std::move(joint)},
          {"improved", t.improved}};
}

nlohmann::json to_json(const PanasGroupSummary& g) {
  nlohmann::json median = nlohmann::json::object();
  nlohmann::json mean = nlohmann::json::object();
  for (PanasItem i : kPanasItems) {
    median[std::string(to_string(i))] = g.median_delta[static_cast<std::size_t>(i)];
    mean[std::string(to_string(i))] = g.mean_delta[static_cast<std::size_t>(i)];
  }
  return {{"n", g.n},
          {"median_delta", std::move(median)},
          {"mean_delta", std::move(mean)},
          {"median_positive_sum_delta", g.median_positive_sum_delta},
          {"median_negative_sum_delta", g.median_negative_sum_delta},
          {"mean_positive_sum_delta", g.mean_positive_sum_delta},
          {"mean_negative_sum_delta", g.mean_negative_sum_delta}};
}

nlohmann::json to_json(const RatingGroupSummary& g) {
  nlohmann::json dims = nlohmann::json::object();
  for (QualityDimension d : kQualityDimensions) {
    const auto& x = g.per_dimension[static_cast<std::size_t>(d)];
    dims[std::string(to_string(d))] = {{"n", x.n}, {"mean", x.mean}, {"median", x.median}, {"sd", x.sd}};
  }
  return {{"n", g.n}, {"dimensions", std::move(dims)}};
}

template <class Summary>
nlohmann::json summary_json(const Summary& s) {
  nlohmann::json per_arm = nlohmann::json::object();
  for (const auto& [arm, group] : s.per_arm) per_arm[std::string(to_string(arm))] = to_json(group);
  return {{"pooled", s.pooled ? to_json(*s.pooled) : nlohmann::json(nullptr)}, {"per_arm", std::move(per_arm)}};
}

}  // namespace

MoodTransition mood_transition(const PamResponse& pre, const PamResponse& post) {
  return {pre.valence(), post.valence(), is_improvement(pre.valence(), post.valence())};
}

PanasDelta panas_delta(const PanasResponse& pre, const PanasResponse& post) {
  PanasDelta d;
  for (PanasItem item : kPanasItems) {
    const int delta = post[item] - pre[item];
    d.per_item[static_cast<std::size_t>(item)] = delta;
    (is_positive(item) ? d.positive_sum_delta : d.negative_sum_delta) += delta;
  }
  return d;
}

Descriptive describe(std::span<const double> xs) {
  return {xs.size(), stats::mean(xs), stats::median(xs), stats::population_sd(xs)};
}

MoodSummary mood_summary(std::span<const GuidedSession> sessions) {
  for (const auto& s : sessions) {
    require(s.pre() && s.pre()->pam, s, "pre-session PAM");
    require(s.post() && s.post()->pam, s, "post-session PAM");
  }
  MoodSummary summary;
  group_by_arm(sessions, summary.pooled, summary.per_arm, [](const std::vector<const GuidedSession*>& group) {
    MoodCounts counts;
    for (const auto* s : group) counts.add(mood_transition(*s->pre()->pam, *s->post()->pam));
    return counts.table();
  });
  return summary;
}

PanasSummary panas_summary(std::span<const GuidedSession> sessions) {
  for (const auto& s : sessions) {
    pre_panas(s);
    post_panas(s);
  }
  PanasSummary summary;
  group_by_arm(sessions, summary.pooled, summary.per_arm, [](const std::vector<const GuidedSession*>& group) {
    PanasGroupSummary g;
    g.n = group.size();
    std::array<std::vector<double>, kPanasItemCount> per_item;
    std::vector<double> pos;
    std::vector<double> neg;
    for (const auto* s : group) {
      const PanasDelta d = panas_delta(pre_panas(*s), post_panas(*s));
      for (std::size_t i = 0; i < kPanasItemCount; ++i) per_item[i].push_back(d.per_item[i]);
      pos.push_back(d.positive_sum_delta);
      neg.push_back(d.negative_sum_delta);
    }
    for (std::size_t i = 0; i < kPanasItemCount; ++i) {
      g.median_delta[i] = stats::median(per_item[i]);
      g.mean_delta[i] = stats::mean(per_item[i]);
    }
    g.median_positive_sum_delta = stats::median(pos);
    g.median_negative_sum_delta = stats::median(neg);
    g.mean_positive_sum_delta = stats::mean(pos);
    g.mean_negative_sum_delta = stats::mean(neg);
    return g;
  });
  return summary;
}

RatingSummary rating_summary(std::span<const GuidedSession> sessions) {
  for (const auto& s : sessions) require(s.ratings().has_value(), s, "quality ratings");
  RatingSummary summary;
  group_by_arm(sessions, summary.pooled, summary.per_arm, [](const std::vector<const GuidedSession*>& group) {
    RatingGroupSummary g;
    g.n = group.size();
    for (QualityDimension d : kQualityDimensions) {
      std::vector<double> xs;
      for (const auto* s : group) xs.push_back((*s->ratings())[d]);
      g.per_dimension[static_cast<std::size_t>(d)] = describe(xs);
    }
    return g;
  });
  return summary;
}

nlohmann::json to_json(const MoodSummary& summary) { return summary_json(summary); }
nlohmann::json to_json(const PanasSummary& summary) { return summary_json(summary); }
nlohmann::json to_json(const RatingSummary& summary) { return summary_json(summary); }

}  // namespace artrec
