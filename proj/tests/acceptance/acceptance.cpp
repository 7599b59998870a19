// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <bit>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <iostream>
#include <sstream>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "artrec/analytics.hpp"
#include "artrec/curation.hpp"
#include "artrec/error.hpp"
#include "artrec/events.hpp"
#include "artrec/interchange.hpp"
#include "artrec/recsys.hpp"
#include "artrec/report.hpp"
#include "artrec/service.hpp"
#include "artrec/session.hpp"
#include "transitions.hpp"
#include "world.hpp"

#ifndef ARTREC_CLI
#error "ARTREC_CLI must name the artrec executable"
#endif

using namespace artrec;
using nlohmann::json;
using Seconds = std::chrono::duration<double>;

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A published target that no correct implementation can reach. Reported as
// FAIL but does not fail the run.
struct KnownDeviation : Failure {
  using Failure::Failure;
};

void expect(bool ok, const std::string& what) {
  if (!ok) throw Failure(what);
}

template <class Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  throw Failure("expected an error, none was raised");
}

double elapsed(std::chrono::steady_clock::time_point since) {
  return Seconds(std::chrono::steady_clock::now() - since).count();
}

const Corpus& fixture_corpus() {
  static auto c = testkit::fixture_corpus();
  return *c;
}

// --- 1 ---------------------------------------------------------------------

// Synthetic space with planted exact ties: several ids share one vector.
RawEmbeddings tied_space(const std::vector<std::string>& ids) {
  auto raw = testkit::random_embeddings(ids, 16, 2024);
  for (std::size_t i : {41, 17, 230, 99}) raw.records[i].vec = raw.records[7].vec;
  for (std::size_t i : {150, 151}) raw.records[i].vec = raw.records[12].vec;
  return raw;
}

std::size_t compare_with_oracle(const EmbeddingSpace& space, const RawEmbeddings& raw, const std::string& seed,
                                std::size_t r) {
  const auto got = top_r(space, seed, r);
  const auto want = testkit::oracle_top_r(raw, seed, r);
  expect(got.entries.size() == want.size(), seed + ": length " + std::to_string(got.entries.size()) + " vs " +
                                                std::to_string(want.size()));
  std::size_t ties = 0;
  for (std::size_t i = 0; i < want.size(); ++i) {
    expect(got.entries[i].painting_id == want[i].id,
           seed + " rank " + std::to_string(i) + ": " + got.entries[i].painting_id + " vs " + want[i].id);
    expect(std::abs(got.entries[i].score - static_cast<double>(want[i].score)) < 1e-6,
           seed + " rank " + std::to_string(i) + ": score off by more than 1e-6");
    if (i && got.entries[i].score == got.entries[i - 1].score) ++ties;
  }
  return ties;
}

std::string ranking_oracle() {
  const auto start = std::chrono::steady_clock::now();
  const auto ids = testkit::make_ids(300);
  const auto catalog = testkit::make_catalog(ids);
  const auto raw = tied_space(ids);
  const EmbeddingSpace space(catalog, raw);
  std::size_t ties = 0;
  for (const auto& seed : ids) ties += compare_with_oracle(space, raw, seed, 50);
  expect(ties > 0, "no constructed ties surfaced in any list");

  const auto& fixture = fixture_corpus();
  for (const char* file : {"embeddings_18_visual.jsonl", "embeddings_18_multimodal.jsonl"}) {
    const auto fraw = read_embeddings(testkit::fixture(file));
    const EmbeddingSpace fspace(fixture.catalog(), fraw);
    for (const auto& p : fixture.catalog().paintings()) compare_with_oracle(fspace, fraw, p.id, 50);
  }
  const double secs = elapsed(start);
  expect(secs < 1.0, "took " + std::to_string(secs) + " s");
  std::ostringstream out;
  out << "m=300 (" << ties << " tied neighbours) + 18-painting fixture, r=50, " << secs * 1000 << " ms";
  return out.str();
}

// --- 2 ---------------------------------------------------------------------

std::string cosine_properties() {
  const auto ids = testkit::make_ids(200);
  const auto catalog = testkit::make_catalog(ids);
  const auto raw = testkit::random_embeddings(ids, 16, 99);
  const EmbeddingSpace space(catalog, raw);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    expect(std::abs(space.similarity(i, i) - 1.0) <= 1e-6, "self-similarity of " + ids[i]);
    for (std::size_t j = 0; j < ids.size(); ++j) {
      const double a = space.similarity(i, j);
      expect(a == space.similarity(j, i), "asymmetric space similarity");
      expect(cosine(raw.records[i].vec, raw.records[j].vec) == cosine(raw.records[j].vec, raw.records[i].vec),
             "asymmetric raw cosine");
      expect(a >= -1.0 - 1e-6 && a <= 1.0 + 1e-6, "score out of range");
    }
  }

  auto scaled = raw;
  std::mt19937 rng(5);
  std::uniform_real_distribution<float> factor(1e-3f, 1e3f);
  for (auto& rec : scaled.records) {
    const float k = factor(rng);
    for (auto& x : rec.vec) x *= k;
  }
  const EmbeddingSpace scaled_space(catalog, scaled);
  for (const auto& seed : ids) {
    const auto a = top_r(space, seed, ids.size());
    const auto b = top_r(scaled_space, seed, ids.size());
    for (std::size_t k = 0; k < a.entries.size(); ++k) {
      expect(a.entries[k].painting_id == b.entries[k].painting_id, "scaled ranking order differs for " + seed);
      expect(std::abs(a.entries[k].score - b.entries[k].score) <= 1e-6, "scaled score differs for " + seed);
    }
  }

  const std::vector<float> zero(16, 0.0f);
  expect(cosine(zero, raw.records[0].vec) == 0.0 && cosine(raw.records[0].vec, zero) == 0.0 &&
             cosine(zero, zero) == 0.0,
         "zero-vector guard");
  auto with_zero = raw;
  with_zero.records[3].vec = zero;
  const EmbeddingSpace zspace(catalog, with_zero);
  expect(zspace.zero_vectors() == std::vector<std::string>{ids[3]}, "zero vector not flagged");
  expect(zspace.similarity(3, 0) == 0.0 && zspace.similarity(3, 3) == 0.0, "zero vector scores not 0.0");
  return "200 vectors, all pairs; scale factors in [1e-3, 1e3]";
}

// --- 3 ---------------------------------------------------------------------

std::string regeneration_monotonicity() {
  const auto& corpus = fixture_corpus();
  std::size_t lists = 0;
  for (const char* space_id : {"visual", "multimodal"}) {
    const auto raw = read_embeddings(testkit::fixture(std::string("embeddings_18_") + space_id + ".jsonl"));
    const Arm arm = std::string(space_id) == "visual" ? Arm::HitlVisual : Arm::HitlMultimodal;
    for (const auto& p : corpus.catalog().paintings()) {
      auto s = CurationSession::start(corpus, testkit::request("cur-a3", arm, {p.id}), testkit::ts(0));
      s.attach_recommendations(corpus, space_id, 200, testkit::ts(1));
      const auto oracle = testkit::oracle_top_r(raw, p.id, 200);
      std::int64_t at = 2;
      std::set<std::string> rejected;
      for (int i = 0; i < 3; ++i) {
        const auto id = s.lists().at(p.id).entries[i].painting_id;
        s.record_action(corpus, testkit::act(ActionKind::Reject, p.id, id, "war imagery", at++));
        rejected.insert(id);
      }
      s.record_action(corpus, testkit::act(ActionKind::Regenerate, p.id, {}, {}, at++));
      expect(s.lists().at(p.id).entries.front().painting_id == oracle[3].id,
             p.id + ": regenerated head is not the former rank 4");
      for (int round = 0; round < 5; ++round) {
        const auto head = s.lists().at(p.id).entries.front().painting_id;
        s.record_action(corpus, testkit::act(ActionKind::Reject, p.id, head, "storm", at++));
        rejected.insert(head);
        s.record_action(corpus, testkit::act(ActionKind::Regenerate, p.id, {}, {}, at++));
        for (const auto& e : s.lists().at(p.id).entries) {
          expect(!rejected.count(e.painting_id), p.id + ": rejected " + e.painting_id + " reappeared");
        }
        expect(s.lists().at(p.id).entries.size() == 17 - rejected.size(), p.id + ": list length");
      }
      ++lists;
    }
  }
  return std::to_string(lists) + " fixture lists, 5 regenerations each";
}

// --- 4 ---------------------------------------------------------------------

std::string table_reproduction() {
  auto s = testkit::session_in(fixture_corpus(), Arm::ExpertOnly, CurationState::Curated);
  s.inject_timing({{"el-01", 11.27}, {"el-05", 12.08}, {"el-12", 14.15}}, testkit::ts(10'000'000));
  const auto expert = s.timing_report();
  auto near = [](double got, double want) { return std::abs(got - want) <= 0.01; };
  expect(near(expert.total, 37.50), "expert total " + std::to_string(expert.total));
  expect(near(expert.mean, 12.50), "expert mean " + std::to_string(expert.mean));
  expect(near(expert.sd, 1.21), "expert sd " + std::to_string(expert.sd));
  const auto visual = make_timing_report({{"a", 5.17}, {"b", 5.08}, {"c", 5.23}});
  expect(near(visual.total, 15.48), "visual total " + std::to_string(visual.total));
  expect(near(visual.mean, 5.16), "visual mean " + std::to_string(visual.mean));
  const auto multimodal = make_timing_report({{"a", 5.33}, {"b", 5.47}, {"c", 6.57}});
  char buf[160];
  if (!near(multimodal.total, 17.27)) {
    // The published row's inputs sum to 17.37; its total, mean and SD fit 6.47
    // as the third value instead. Accept only the arithmetically correct sum.
    const double sum = 5.33 + 5.47 + 6.57;
    expect(std::abs(multimodal.total - sum) < 1e-9, "multimodal total " + std::to_string(multimodal.total));
    std::snprintf(buf, sizeof buf,
                  "expert and visual rows match; multimodal total %.2f, published 17.27 is not the sum of its "
                  "inputs",
                  multimodal.total);
    throw KnownDeviation(buf);
  }
  std::snprintf(buf, sizeof buf, "expert %.2f/%.2f/%.2f, visual %.2f, multimodal %.2f", expert.total, expert.mean,
                expert.sd, visual.total, multimodal.total);
  return buf;
}

// --- 5 ---------------------------------------------------------------------

std::string state_machine_soundness() {
  int illegal = 0;
  int pairs = 0;
  for (Arm arm : {Arm::ExpertOnly, Arm::HitlVisual, Arm::HitlMultimodal}) {
    for (CurationState state : testkit::kStates) {
      if (arm == Arm::ExpertOnly && state == CurationState::Recommended) continue;
      for (testkit::Op op : testkit::kOps) {
        ++pairs;
        auto s = testkit::session_in(fixture_corpus(), arm, state);
        const std::string where = std::string(to_string(arm)) + "/" + std::string(to_string(state)) + "/" +
                                  testkit::op_name(op);
        if (testkit::legal(arm, state, op)) {
          try {
            testkit::run(fixture_corpus(), s, op);
          } catch (const Error& e) {
            throw Failure(where + ": legal edge failed: " + e.what());
          }
        } else {
          const auto before = s.to_json().dump();
          ErrorCode code{};
          try {
            code = code_of([&] { testkit::run(fixture_corpus(), s, op); });
          } catch (const Failure&) {
            throw Failure(where + ": illegal edge accepted");
          }
          expect(code == ErrorCode::IllegalTransition, where + ": got " + std::string(to_string(code)));
          expect(s.to_json().dump() == before, where + ": state changed on a failed operation");
          ++illegal;
        }
      }
    }
  }

  // Persisted logs replay to identical exports.
  testkit::TempDir dir;
  auto config = load_config(testkit::fixture("demo.conf"));
  config.store_dir = dir / "store";
  Service svc(config);
  for (const char* arm : {"hitl_visual", "hitl_multimodal", "expert_only"}) {
    const auto c = svc.create_curation({{"therapist_id", "t"}, {"arm", arm}, {"seeds", {"el-01", "el-08"}}});
    const std::string id = c.at("session_id");
    if (std::string(arm) != "expert_only") {
      const auto att = svc.attach(id, json::object());
      const auto head = att.at("lists").at("el-01").at("entries")[0].at("painting_id");
      svc.record_action(id, {{"kind", "reject"}, {"seed_id", "el-01"}, {"subject_id", head}, {"reason", "injury"}});
      svc.record_action(id, {{"kind", "regenerate"}, {"seed_id", "el-01"}});
    }
    svc.record_action(id, {{"kind", "view"}, {"seed_id", "el-08"}});
  }
  std::size_t logs = 0;
  for (const auto& key : svc.store().keys(RecordKind::SessionEvent)) {
    const auto events = read_event_log(config.store_dir / "session_event" / (key + ".jsonl"));
    expect(CurationSession::replay(events, svc.corpus()).to_json().dump() == svc.get_curation(key).dump(),
           key + ": replayed export differs");
    ++logs;
  }
  expect(logs == 3, "expected 3 persisted logs");
  return std::to_string(pairs) + " (state, op) pairs, " + std::to_string(illegal) + " illegal; " +
         std::to_string(logs) + " persisted logs replayed";
}

// --- 6 ---------------------------------------------------------------------

std::string aggregation_fixtures() {
  const auto& corpus = fixture_corpus();
  std::vector<GuidedSession> population;
  constexpr int kN = 157;
  for (int i = 0; i < kN; ++i) {
    const Mood pre = i < 74 ? Mood::Sad : (i < 120 ? Mood::Neutral : Mood::Calm);
    const Mood post = i < 114 ? Mood::Relaxed : (i < 140 ? Mood::Neutral : Mood::Tense);
    population.push_back(testkit::complete_session(corpus, "gs-" + std::to_string(i), Arm::HitlVisual,
                                                   testkit::bundle(pre), testkit::bundle(post),
                                                   QualityRatings::uniform(3)));
  }
  const auto mood = mood_summary(population);
  expect(mood.pooled.has_value(), "no pooled table");
  const double pre_negative = 100.0 * mood.pooled->pre[static_cast<int>(Valence::Negative)];
  const double post_positive = 100.0 * mood.pooled->post[static_cast<int>(Valence::Positive)];
  expect(std::abs(pre_negative - 47.1) <= 0.1, "pre negative " + std::to_string(pre_negative));
  expect(std::abs(post_positive - 72.6) <= 0.1, "post positive " + std::to_string(post_positive));

  std::vector<GuidedSession> flat;
  for (int v = 1; v <= 5; ++v) {
    flat.push_back(testkit::complete_session(corpus, "gf-" + std::to_string(v), Arm::ExpertOnly,
                                             testkit::bundle(Mood::Calm, v), testkit::bundle(Mood::Calm, v),
                                             QualityRatings::uniform(3)));
  }
  const auto panas = panas_summary(flat);
  expect(panas.pooled.has_value(), "no pooled PANAS");
  for (double m : panas.pooled->median_delta) expect(m == 0.0, "non-zero PANAS median");
  expect(panas.pooled->median_positive_sum_delta == 0.0 && panas.pooled->median_negative_sum_delta == 0.0,
         "non-zero PANAS sum median");

  std::vector<GuidedSession> rated;
  for (int v : {1, 3, 5}) {
    rated.push_back(testkit::complete_session(corpus, "gr-" + std::to_string(v), Arm::HitlMultimodal,
                                              testkit::bundle(Mood::Calm), testkit::bundle(Mood::Calm),
                                              QualityRatings::uniform(v)));
  }
  const auto ratings = rating_summary(rated);
  expect(ratings.pooled.has_value(), "no pooled ratings");
  for (const auto& d : ratings.pooled->per_dimension) {
    expect(std::abs(d.mean - 3.0) <= 1e-5, "rating mean " + std::to_string(d.mean));
    expect(std::abs(d.sd - std::sqrt(8.0 / 3.0)) <= 1e-5, "rating sd " + std::to_string(d.sd));
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "N=%d: pre negative %.2f%%, post positive %.2f%%; rating sd %.6f", kN,
                pre_negative, post_positive, ratings.pooled->per_dimension[0].sd);
  return buf;
}

// --- 7 ---------------------------------------------------------------------

std::string interchange_round_trip() {
  // 100 vectors of arbitrary finite float32 bit patterns, including
  // subnormals and signed zeros.
  std::mt19937 rng(100);
  std::uniform_int_distribution<std::uint32_t> bits;
  RawEmbeddings raw;
  raw.header = {"visual", "roundtrip", 32, false};
  for (int i = 0; i < 100; ++i) {
    EmbeddingRecord rec{testkit::numbered_id("v", i), std::vector<float>(32)};
    for (auto& x : rec.vec) {
      do {
        x = std::bit_cast<float>(bits(rng));
      } while (!std::isfinite(x));
    }
    raw.records.push_back(std::move(rec));
  }
  raw.records[0].vec[0] = -0.0f;
  raw.records[0].vec[1] = std::numeric_limits<float>::denorm_min();
  raw.records[0].vec[2] = std::numeric_limits<float>::max();

  testkit::TempDir dir;
  write_embeddings(dir / "a.jsonl", raw, EmbeddingFormat::Jsonl);
  const auto text = read_embeddings(dir / "a.jsonl");
  write_embeddings(dir / "b.vaem", text, EmbeddingFormat::Binary);
  const auto bin = read_embeddings(dir / "b.vaem", text.header);
  write_embeddings(dir / "c.jsonl", bin, EmbeddingFormat::Jsonl);
  const auto back = read_embeddings(dir / "c.jsonl");
  expect(back.records.size() == 100, "record count");
  for (std::size_t i = 0; i < 100; ++i) {
    expect(back.records[i].id == raw.records[i].id, "id order");
    expect(std::memcmp(back.records[i].vec.data(), raw.records[i].vec.data(), 32 * sizeof(float)) == 0,
           raw.records[i].id + ": float bits changed");
  }
  expect(testkit::read_file(dir / "a.jsonl") == testkit::read_file(dir / "c.jsonl"), "JSONL text differs");

  std::istringstream bad_header("{\"space\":\"v\",\"dim\":-3}\n");
  expect(code_of([&] { read_embeddings_jsonl(bad_header); }) == ErrorCode::MalformedHeader, "malformed header");
  std::istringstream bad_magic("NOPE\x01\x00\x00\x00");
  expect(code_of([&] { read_embeddings_binary(bad_magic); }) == ErrorCode::MalformedHeader, "bad magic");
  std::istringstream short_record(
      "{\"space\":\"v\",\"model\":\"m\",\"dim\":4,\"normalized\":false}\n{\"id\":\"a\",\"vec\":[1,2,3]}\n");
  expect(code_of([&] { read_embeddings_jsonl(short_record); }) == ErrorCode::DimensionMismatch,
         "dimension mismatch");
  return "100 x 32 float32 via JSONL -> VAEM -> JSONL, bit-exact";
}

// --- 8 ---------------------------------------------------------------------

struct Run {
  int exit_code;
  std::string out;
};

Run run_cli(const std::string& args, const testkit::TempDir& dir) {
  const auto out = dir / "stdout.txt";
  const auto err = dir / "stderr.txt";
  const std::string cmd = std::string(ARTREC_CLI) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  if (code != 0) throw Failure("`artrec " + args + "` exited " + std::to_string(code) + ": " + testkit::read_file(err));
  return {code, testkit::read_file(out)};
}

std::string write_config(const testkit::TempDir& dir) {
  const auto path = dir / "artrec.conf";
  testkit::write_file(path, "catalog = \"" + testkit::fixture("elicitation_18.jsonl").string() + "\"\n" +
                                "space.visual = \"" + testkit::fixture("embeddings_18_visual.jsonl").string() + "\"\n" +
                                "space.multimodal = \"" +
                                testkit::fixture("embeddings_18_multimodal.jsonl").string() + "\"\n" +
                                "r_default = 200\nstore_dir = \"" + (dir / "store").string() + "\"\n" +
                                "host = \"127.0.0.1\"\nport = 0\n");
  return path.string();
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
    } else if (c == ',' && !quoted) {
      cells.push_back(cell);
      cell.clear();
    } else {
      cell += c;
    }
  }
  cells.push_back(cell);
  return cells;
}

std::string headless_run() {
  testkit::TempDir dir;
  const auto start = std::chrono::steady_clock::now();
  const std::string conf = "--config " + write_config(dir);

  auto r = run_cli(conf + " ingest-catalog", dir);
  expect(json::parse(r.out).at("count") == 18, "catalog count");
  for (const char* space : {"visual", "multimodal"}) {
    r = run_cli("import-embeddings " + testkit::fixture(std::string("embeddings_18_") + space + ".jsonl").string() +
                    " --catalog " + testkit::fixture("elicitation_18.jsonl").string(),
                dir);
    expect(json::parse(r.out).at("count") == 18, std::string(space) + " count");
  }
  r = run_cli(conf + " recommend --space visual --seed el-01 --r 200", dir);
  expect(json::parse(r.out).at("entries").size() == 17, "r=200 list not truncated to 17");

  r = run_cli(conf + " curate-replay " + testkit::fixture("curation_script.jsonl").string(), dir);
  const auto replay = json::parse(r.out);
  const auto& cur = replay.at("curations").at(0);
  expect(cur.at("state") == "delivered", "curation not delivered");
  expect(cur.at("curated").at("el-01").size() == 3, "three picks for el-01");
  const auto raw = read_embeddings(testkit::fixture("embeddings_18_visual.jsonl"));
  const auto oracle = testkit::oracle_top_r(raw, "el-01", 200);
  expect(cur.at("lists").at("el-01").at("entries").at(0).at("painting_id") == oracle[3].id,
         "regenerated head is not the former rank 4");
  expect(cur.at("rejected").at("el-01").size() == 3, "three rejections recorded");
  expect(replay.at("sessions").at(0).at("complete") == true, "guided session incomplete");

  const auto csv_path = dir / "report.csv";
  run_cli(conf + " export-report --out " + csv_path.string(), dir);
  std::istringstream csv(testkit::read_file(csv_path));
  std::string line;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(csv, line)) rows.push_back(split_row(line));
  expect(rows.size() == 2, "expected header + 1 row, got " + std::to_string(rows.size()) + " lines");
  expect(rows[0] == session_csv_columns(), "CSV header does not match the schema");
  expect(rows[1].size() == rows[0].size(), "row width");
  auto cell = [&](const std::string& name) {
    return rows[1][std::find(rows[0].begin(), rows[0].end(), name) - rows[0].begin()];
  };
  expect(cell("session_id") == "gs-demo" && cell("arm") == "hitl_visual", "row identity");
  expect(cell("pre_pam_valence") == "negative" && cell("post_pam_valence") == "positive", "valences");
  expect(cell("reflection_count") == "3" && cell("complete") == "true", "completeness");
  for (const auto& name : rows[0]) {
    if (name != "reflection_sentiments") expect(!cell(name).empty(), "empty cell " + name);
  }
  const double secs = elapsed(start);
  expect(secs < 5.0, "took " + std::to_string(secs) + " s");
  return "7 CLI invocations, exit 0, " + std::to_string(rows[0].size()) + "-column CSV, " +
         std::to_string(static_cast<int>(secs * 1000)) + " ms";
}

// --- 9 ---------------------------------------------------------------------

struct ServerProcess {
  pid_t pid = -1;
  int port = -1;

  ServerProcess(const std::string& config) {
    int fds[2];
    if (pipe(fds) != 0) throw Failure("pipe failed");
    pid = fork();
    if (pid == 0) {
      dup2(fds[1], STDOUT_FILENO);
      close(fds[0]);
      close(fds[1]);
      execl(ARTREC_CLI, ARTREC_CLI, "--config", config.c_str(), "serve", "--port", "0", static_cast<char*>(nullptr));
      _exit(127);
    }
    close(fds[1]);
    std::string banner;
    char c;
    while (read(fds[0], &c, 1) == 1 && c != '\n') banner += c;
    close(fds[0]);
    const auto colon = banner.rfind(':');
    if (colon == std::string::npos) {
      kill_hard();
      throw Failure("server did not report a port: '" + banner + "'");
    }
    port = std::stoi(banner.substr(colon + 1));
  }
  ~ServerProcess() { kill_hard(); }

  void kill_hard() {
    if (pid > 0) {
      kill(pid, SIGKILL);
      waitpid(pid, nullptr, 0);
      pid = -1;
    }
  }

  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port);
    c.set_read_timeout(10, 0);
    return c;
  }

  std::string get(const std::string& path) const {
    auto res = client().Get(path);
    if (!res || res->status != 200) throw Failure("GET " + path + " failed");
    return res->body;
  }

  json post(const std::string& path, const json& body) const {
    auto res = client().Post(path, body.dump(), "application/json");
    if (!res) throw Failure("POST " + path + ": no response");
    if (res->status >= 300) throw Failure("POST " + path + ": " + res->body);
    return json::parse(res->body);
  }
};

std::string restart_recovery() {
  testkit::TempDir dir;
  const std::string config = write_config(dir);
  std::vector<std::string> paths{"/export/sessions.csv", "/analytics/mood", "/analytics/panas", "/analytics/ratings"};
  std::map<std::string, std::string> before;
  std::string open_curation;
  {
    ServerProcess server(config);
    // Curation A: mid-review, not finalized.
    auto a = server.post("/curation", {{"therapist_id", "t"}, {"arm", "hitl_visual"}, {"seeds", {"el-03", "el-09"}}});
    open_curation = a.at("session_id");
    a = server.post("/curation/" + open_curation + "/attach", json::object());
    const auto head = a.at("lists").at("el-03").at("entries")[0].at("painting_id");
    server.post("/curation/" + open_curation + "/action",
                {{"kind", "reject"}, {"seed_id", "el-03"}, {"subject_id", head}, {"reason", "war imagery"}});
    server.post("/curation/" + open_curation + "/action", {{"kind", "regenerate"}, {"seed_id", "el-03"}});

    // Curation B: delivered, one complete and one half-finished session.
    auto b = server.post("/curation", {{"therapist_id", "t"}, {"arm", "hitl_multimodal"}, {"seeds", {"el-14"}}});
    const std::string bid = b.at("session_id");
    b = server.post("/curation/" + bid + "/attach", json::object());
    server.post("/curation/" + bid + "/action", {{"kind", "view"}, {"seed_id", "el-14"}});
    json picks = json::array();
    for (int i = 0; i < 3; ++i) picks.push_back(b.at("lists").at("el-14").at("entries")[i].at("painting_id"));
    server.post("/curation/" + bid + "/finalize", {{"picks", {{"el-14", picks}}}});
    json panas = json::object();
    for (const char* item : {"attentive", "determined", "enthusiastic", "interested", "strong", "afraid",
                             "distressed", "nervous", "scared", "upset"}) {
      panas[item] = 2;
    }
    for (int k = 0; k < 2; ++k) {
      const auto g = server.post("/sessions", {{"curation_id", bid}, {"seed_id", "el-14"}});
      const std::string gid = g.at("session_id");
      paths.push_back("/sessions/" + gid);
      server.post("/sessions/" + gid + "/pre", {{"pam", "irritated"}, {"panas", panas}});
      server.post("/sessions/" + gid + "/reflection", {{"painting_id", picks[0]}, {"text", "Peaceful water."}});
      if (k == 0) {
        server.post("/sessions/" + gid + "/reflection", {{"painting_id", picks[1]}, {"text", "Warm and safe."}});
        server.post("/sessions/" + gid + "/reflection", {{"painting_id", picks[2]}, {"text", "A bit dark."}});
        server.post("/sessions/" + gid + "/post", {{"pam", "relaxed"}, {"panas", panas}});
        server.post("/sessions/" + gid + "/ratings", {{"accuracy", 5}, {"diversity", 4}, {"novelty", 3},
                                                      {"serendipity", 3}, {"immersion", 4}, {"engagement", 5}});
      }
    }
    paths.push_back("/curation/" + open_curation);
    paths.push_back("/curation/" + bid);
    paths.push_back("/curation/" + bid + "/timing");
    for (const auto& p : paths) before[p] = server.get(p);
    server.kill_hard();
  }
  ServerProcess restarted(config);
  for (const auto& p : paths) expect(restarted.get(p) == before.at(p), p + " differs after restart");
  // The recovered session accepts further work.
  const auto cur = json::parse(restarted.get("/curation/" + open_curation));
  json picks = json::object();
  for (const char* seed : {"el-03", "el-09"}) {
    for (int i = 0; i < 3; ++i) picks[seed].push_back(cur.at("lists").at(seed).at("entries")[i].at("painting_id"));
  }
  restarted.post("/curation/" + open_curation + "/finalize", {{"picks", picks}, {"version", cur.at("version")}});
  return std::to_string(paths.size()) + " exports byte-identical after SIGKILL + restart";
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<std::string()> check;
  };
  const std::vector<Criterion> criteria{
      {1, "ranking oracle equivalence", ranking_oracle},
      {2, "cosine kernel properties", cosine_properties},
      {3, "regeneration monotonicity", regeneration_monotonicity},
      {4, "timing table reproduction", table_reproduction},
      {5, "state-machine soundness and replay", state_machine_soundness},
      {6, "aggregation fixtures", aggregation_fixtures},
      {7, "interchange round trip", interchange_round_trip},
      {8, "end-to-end headless CLI run", headless_run},
      {9, "restart recovery", restart_recovery},
  };
  int failed = 0;
  int known = 0;
  for (const auto& c : criteria) {
    std::string detail;
    bool ok = false;
    try {
      detail = c.check();
      ok = true;
    } catch (const KnownDeviation& e) {
      detail = std::string("known deviation: ") + e.what();
      ++known;
    } catch (const std::exception& e) {
      detail = e.what();
      ++failed;
    }
    std::printf("[%s] %d. %s: %s\n", ok ? "PASS" : "FAIL", c.id, c.name, detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed, %d known deviation(s), %d unexpected failure(s)\n",
              static_cast<int>(criteria.size()) - failed - known, criteria.size(), known, failed);
  return failed == 0 ? 0 : 1;
}
