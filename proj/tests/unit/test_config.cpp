#include <doctest.h>

#include <sstream>

#include "artrec/config.hpp"
#include "artrec/error.hpp"
#include "support.hpp"

using namespace artrec;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an artrec::Error");
  return ErrorCode::InvalidArgument;
}

Config parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "/base");
}

}  // namespace

TEST_CASE("full config parses with relative paths resolved") {
  const auto c = parse(R"(# comment
catalog = "data/cat.jsonl"
space.visual = data/v.jsonl
space.multimodal = "/abs/m.vaem"
r_default = 50
store_dir = store   # trailing comment
matrix_limit = 100
host = "0.0.0.0"
port = 9001
lexicon = lex.txt
sentiment_url = "http://127.0.0.1:9000/classify"
themes = "awe, safety ,  hope"
)");
  CHECK(c.catalog == "/base/data/cat.jsonl");
  CHECK(c.spaces.at("visual") == "/base/data/v.jsonl");
  CHECK(c.spaces.at("multimodal") == "/abs/m.vaem");
  CHECK(c.r_default == 50);
  CHECK(c.store_dir == "/base/store");
  CHECK(c.matrix_limit == 100);
  CHECK(c.host == "0.0.0.0");
  CHECK(c.port == 9001);
  CHECK(c.lexicon == std::filesystem::path("/base/lex.txt"));
  CHECK(c.sentiment_url == "http://127.0.0.1:9000/classify");
  CHECK(c.themes == std::vector<std::string>{"awe", "safety", "hope"});
}

TEST_CASE("defaults") {
  const auto c = parse("catalog = c.jsonl\n");
  CHECK(c.r_default == 200);
  CHECK(c.port == 8080);
  CHECK_FALSE(c.sentiment_url);
  CHECK(c.spaces.empty());
}

TEST_CASE("config errors") {
  CHECK(code_of([] { parse("space.visual = v.jsonl\n"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse("catalog = c\nbogus = 1\n"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse("catalog = c\nr_default = zero\n"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse("catalog = c\nr_default = 0\n"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse("catalog = c\nport = 70000\n"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse("catalog = c\njust words\n"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse("catalog = c\nspace. = v\n"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { load_config("/nonexistent/artrec.conf"); }) == ErrorCode::ConfigError);
}

TEST_CASE("demo config loads relative to its own directory") {
  const auto c = load_config(testkit::fixture("demo.conf"));
  CHECK(c.catalog == testkit::fixture("elicitation_18.jsonl"));
  CHECK(c.spaces.size() == 2);
}
