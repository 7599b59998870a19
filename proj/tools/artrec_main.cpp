// artrec: command-line front end for catalog ingestion, embedding import,
// recommendation, scripted curation replay, reporting and the HTTP service.

#include <csignal>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "artrec/catalog.hpp"
#include "artrec/config.hpp"
#include "artrec/curation.hpp"
#include "artrec/embeddings.hpp"
#include "artrec/error.hpp"
#include "artrec/events.hpp"
#include "artrec/http/remote_classifier.hpp"
#include "artrec/http/server.hpp"
#include "artrec/interchange.hpp"
#include "artrec/recsys.hpp"
#include "artrec/service.hpp"
#include "artrec/store.hpp"

namespace {

using artrec::Error;
using artrec::ErrorCode;
using nlohmann::json;

struct Common {
  std::string config_path;
  std::string store_dir;
};

artrec::Config load(const Common& common) {
  if (common.config_path.empty()) throw Error(ErrorCode::ConfigError, "--config is required");
  auto config = artrec::load_config(common.config_path);
  if (!common.store_dir.empty()) config.store_dir = common.store_dir;
  return config;
}

std::shared_ptr<const artrec::SentimentClassifier> classifier_for(const artrec::Config& config) {
  if (config.sentiment_url) return std::make_shared<artrec::RemoteClassifier>(*config.sentiment_url);
  return nullptr;
}

int ingest_catalog(const Common& common, const std::string& path_arg) {
  std::filesystem::path path = path_arg;
  std::optional<artrec::Config> config;
  if (!common.config_path.empty()) config = load(common);
  if (path.empty()) {
    if (!config) throw Error(ErrorCode::ConfigError, "give a catalog path or --config");
    path = config->catalog;
  }
  const auto catalog = artrec::load_catalog(path);
  const json summary{{"source_label", catalog.source_label()}, {"count", catalog.size()}};
  if (config) artrec::Store(config->store_dir).put_document(artrec::RecordKind::Catalog, "catalog", summary);
  std::cout << summary.dump(2) << '\n';
  return 0;
}

int import_embeddings(const Common& common, const std::string& file, std::string catalog_path,
                      const std::string& space, const std::string& model, const std::string& out,
                      const std::string& format) {
  if (catalog_path.empty()) catalog_path = load(common).catalog.string();
  const auto catalog = artrec::load_catalog(catalog_path);
  const auto raw = artrec::read_embeddings(file, {space, model, 0, false});
  const artrec::EmbeddingSpace embedding_space(catalog, raw);
  const json summary{{"space", embedding_space.space_id()},
                     {"model", embedding_space.model_name()},
                     {"dim", embedding_space.dim()},
                     {"count", embedding_space.size()},
                     {"normalized_input", raw.header.normalized},
                     {"zero_vectors", embedding_space.zero_vectors()}};
  if (!out.empty()) {
    const auto fmt = format == "binary" ? artrec::EmbeddingFormat::Binary : artrec::EmbeddingFormat::Jsonl;
    artrec::write_embeddings(out, raw, fmt);
  }
  std::cout << summary.dump(2) << '\n';
  return 0;
}

int recommend(const Common& common, const std::string& space_id, const std::string& seed, std::size_t r,
              const std::vector<std::string>& exclude) {
  const auto config = load(common);
  const auto corpus = artrec::load_corpus(config);
  const std::set<std::string> excluded(exclude.begin(), exclude.end());
  const auto list = artrec::top_r(corpus->space(space_id), seed, r ? r : config.r_default, excluded,
                                  artrec::Timestamp::now());
  std::cout << json(list).dump(2) << '\n';
  return 0;
}

// Each script line: {"op": ..., "at": <ms>, ...request fields}. The line's
// `at` drives the service clock so a replay is fully deterministic.
int curate_replay(const Common& common, const std::string& script_path, bool event_log) {
  const auto config = load(common);
  if (event_log) {
    const auto corpus = artrec::load_corpus(config);
    const auto events = artrec::read_event_log(script_path);
    std::cout << artrec::CurationSession::replay(events, *corpus).to_json().dump(2) << '\n';
    return 0;
  }

  auto now = std::make_shared<artrec::Timestamp>();
  artrec::Service service(config, [now] { return *now; }, classifier_for(config));

  std::ifstream in(script_path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read script '" + script_path + "'");
  std::set<std::string> curations;
  std::set<std::string> sessions;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    json req;
    try {
      req = json::parse(text);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::SchemaError, "script line " + std::to_string(line) + ": " + e.what());
    }
    const std::string op = req.value("op", "");
    if (req.contains("at")) *now = {req.at("at").get<std::int64_t>()};
    req.erase("op");
    req.erase("at");
    try {
      if (op == "create_curation") {
        curations.insert(service.create_curation(req).at("session_id").get<std::string>());
      } else if (op == "attach") {
        service.attach(req.at("curation_id").get<std::string>(), req);
      } else if (op == "action") {
        service.record_action(req.at("curation_id").get<std::string>(), req);
      } else if (op == "finalize") {
        service.finalize(req.at("curation_id").get<std::string>(), req);
      } else if (op == "timing") {
        service.inject_timing(req.at("curation_id").get<std::string>(), req);
      } else if (op == "build_session") {
        sessions.insert(service.build_session(req).at("session_id").get<std::string>());
      } else if (op == "pre") {
        service.record_pre(req.at("session_id").get<std::string>(), req);
      } else if (op == "post") {
        service.record_post(req.at("session_id").get<std::string>(), req);
      } else if (op == "reflection") {
        service.record_reflection(req.at("session_id").get<std::string>(), req);
      } else if (op == "ratings") {
        json body = req;
        body.erase("session_id");
        service.record_ratings(req.at("session_id").get<std::string>(), body);
      } else if (op == "theme") {
        service.record_theme(req);
      } else {
        throw Error(ErrorCode::SchemaError, "unknown op '" + op + "'");
      }
    } catch (const Error& e) {
      throw Error(e.code(), "script line " + std::to_string(line) + " (" + op + "): " + e.what());
    } catch (const json::exception& e) {
      throw Error(ErrorCode::SchemaError, "script line " + std::to_string(line) + " (" + op + "): " + e.what());
    }
  }

  json out{{"curations", json::array()}, {"sessions", json::array()}};
  for (const auto& id : curations) out["curations"].push_back(service.get_curation(id));
  for (const auto& id : sessions) out["sessions"].push_back(service.get_session(id));
  std::cout << out.dump(2) << '\n';
  return 0;
}

int export_report(const Common& common, const std::string& out_path, bool summary) {
  const auto config = load(common);
  artrec::Service service(config, artrec::system_clock(), classifier_for(config));
  const std::string csv = service.export_csv();
  if (out_path.empty() || out_path == "-") {
    std::cout << csv;
  } else {
    std::ofstream out(out_path, std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + out_path + "'");
    out << csv;
  }
  if (summary) {
    const json s{{"mood", service.mood()}, {"panas", service.panas()}, {"ratings", service.ratings()}};
    (out_path.empty() || out_path == "-" ? std::cerr : std::cout) << s.dump(2) << '\n';
  }
  return 0;
}

artrec::HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

int serve(const Common& common, std::string host, int port) {
  auto config = load(common);
  if (!host.empty()) config.host = host;
  if (port >= 0) config.port = port;
  artrec::Service service(config, artrec::system_clock(), classifier_for(config));
  artrec::HttpServer server(service);
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);

  int bound = config.port;
  if (config.port == 0) {
    bound = server.bind_any_port(config.host);
    if (bound < 0) throw Error(ErrorCode::IoError, "cannot bind " + config.host);
  }
  std::cout << "artrec listening on http://" << config.host << ':' << bound << std::endl;
  const bool ok = config.port == 0 ? server.listen_after_bind() : server.listen(config.host, config.port);
  g_server = nullptr;
  if (!ok) throw Error(ErrorCode::IoError, "cannot listen on " + config.host + ":" + std::to_string(config.port));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"artrec: visual-art recommendation and curation for guided art therapy"};
  app.require_subcommand(1);
  Common common;
  app.add_option("-c,--config", common.config_path, "Deployment config file");
  app.add_option("--store", common.store_dir, "Override the store directory from the config");

  std::string catalog_arg;
  auto* ingest = app.add_subcommand("ingest-catalog", "Validate a catalog (JSON Lines) and record it in the store");
  ingest->add_option("catalog", catalog_arg, "Catalog path (default: from --config)");

  std::string emb_file, emb_catalog, emb_space, emb_model, emb_out, emb_format = "jsonl";
  auto* import = app.add_subcommand("import-embeddings", "Validate an embedding file and optionally convert it");
  import->add_option("file", emb_file, "Embedding file (JSON Lines or VAEM binary)")->required();
  import->add_option("--catalog", emb_catalog, "Catalog to validate ids against (default: from --config)");
  import->add_option("--space", emb_space, "Space id for binary input");
  import->add_option("--model", emb_model, "Model name for binary input");
  import->add_option("--out", emb_out, "Write the embeddings to this path");
  import->add_option("--format", emb_format, "Output format")->check(CLI::IsMember({"jsonl", "binary"}));

  std::string rec_space, rec_seed;
  std::size_t rec_r = 0;
  std::vector<std::string> rec_exclude;
  auto* rec = app.add_subcommand("recommend", "Print the top-r list for a seed painting");
  rec->add_option("--space", rec_space, "Embedding space id")->required();
  rec->add_option("--seed", rec_seed, "Seed painting id")->required();
  rec->add_option("-r,--r", rec_r, "List length (default: r_default)");
  rec->add_option("--exclude", rec_exclude, "Painting ids to exclude")->delimiter(',');

  std::string script;
  bool as_event_log = false;
  auto* replay = app.add_subcommand("curate-replay", "Run a scripted curation and guided session headlessly");
  replay->add_option("script", script, "Script (JSON Lines of operations)")->required();
  replay->add_flag("--event-log", as_event_log, "Input is a persisted curation event log; print its state");

  std::string report_out;
  bool report_summary = false;
  auto* report = app.add_subcommand("export-report", "Export one CSV row per guided session");
  report->add_option("-o,--out", report_out, "Output CSV path (default: stdout)");
  report->add_flag("--summary", report_summary, "Also print mood/PANAS/rating summaries as JSON");

  std::string serve_host;
  int serve_port = -1;
  auto* srv = app.add_subcommand("serve", "Run the HTTP+JSON service");
  srv->add_option("--host", serve_host, "Bind address (default: from config)");
  srv->add_option("--port", serve_port, "Port, 0 for ephemeral (default: from config)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) return ingest_catalog(common, catalog_arg);
    if (*import) return import_embeddings(common, emb_file, emb_catalog, emb_space, emb_model, emb_out, emb_format);
    if (*rec) return recommend(common, rec_space, rec_seed, rec_r, rec_exclude);
    if (*replay) return curate_replay(common, script, as_event_log);
    if (*report) return export_report(common, report_out, report_summary);
    if (*srv) return serve(common, serve_host, serve_port);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
