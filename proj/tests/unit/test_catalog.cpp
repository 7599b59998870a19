#include <doctest.h>

#include <sstream>

#include "artrec/catalog.hpp"
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

}  // namespace

TEST_CASE("three-record catalog loads in file order") {
  const auto catalog = load_catalog(testkit::fixture("catalog_3.jsonl"));
  REQUIRE(catalog.size() == 3);
  CHECK(catalog.paintings()[0].id == "ng-0001");
  CHECK(catalog.paintings()[2].id == "ng-0003");
  CHECK(catalog.source_label() == "catalog_3.jsonl");
  CHECK(catalog.get("ng-0002").artist.size() > 0);
}

TEST_CASE("duplicate id is rejected") {
  CHECK(code_of([] { load_catalog(testkit::fixture("catalog_duplicate.jsonl")); }) == ErrorCode::DuplicateId);
}

TEST_CASE("missing required field names the line") {
  try {
    load_catalog(testkit::fixture("catalog_missing_field.jsonl"));
    FAIL("expected SchemaError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SchemaError);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    CHECK(std::string(e.what()).find("image_uri") != std::string::npos);
  }
}

TEST_CASE("get_painting on an absent id raises NotFound") {
  const auto catalog = load_catalog(testkit::fixture("catalog_3.jsonl"));
  CHECK(code_of([&] { get_painting(catalog, "ng-9999"); }) == ErrorCode::NotFound);
  CHECK(catalog.find("ng-9999") == nullptr);
  CHECK(get_painting(catalog, "ng-0001").id == "ng-0001");
}

TEST_CASE("painting id charset") {
  CHECK(is_valid_painting_id("ng-0001"));
  CHECK(is_valid_painting_id("A_b-9"));
  CHECK_FALSE(is_valid_painting_id(""));
  CHECK_FALSE(is_valid_painting_id("has space"));
  CHECK_FALSE(is_valid_painting_id("slash/id"));
  CHECK_FALSE(is_valid_painting_id("dot.id"));
}

TEST_CASE("bad id and empty fields are schema errors") {
  std::istringstream bad_id(R"({"id":"a b","title":"t","artist":"a","image_uri":"u","license":"l"})");
  CHECK(code_of([&] { parse_catalog(bad_id, "x"); }) == ErrorCode::SchemaError);
  std::istringstream not_json("{nope\n");
  CHECK(code_of([&] { parse_catalog(not_json, "x"); }) == ErrorCode::SchemaError);
}

TEST_CASE("blank lines are skipped and tags survive") {
  std::istringstream in(
      "\n"
      R"({"id":"a","title":"T","artist":"A","image_uri":"u","license":"CC0","tags":{"genre":"landscape"}})"
      "\n\n");
  const auto catalog = parse_catalog(in, "mem");
  REQUIRE(catalog.size() == 1);
  CHECK(catalog.get("a").tags.at("genre") == "landscape");
}

TEST_CASE("to_jsonl reloads to an equal catalog") {
  const auto catalog = load_catalog(testkit::fixture("elicitation_18.jsonl"));
  std::istringstream in(catalog.to_jsonl());
  const auto again = parse_catalog(in, catalog.source_label());
  CHECK(again.paintings() == catalog.paintings());
  CHECK(again.to_jsonl() == catalog.to_jsonl());
}

TEST_CASE("missing file is an IoError") {
  CHECK(code_of([] { load_catalog("/nonexistent/catalog.jsonl"); }) == ErrorCode::IoError);
}
