#include <sstream>

#include "doctest.h"
#include "multiassoc/corpus.hpp"
#include "multiassoc/rng.hpp"
#include "testutil.hpp"

using namespace multiassoc;

namespace {

EntityCatalog small_catalog() {
  EntityCatalog catalog;
  catalog.add("Q567", EntityType::Person, "Hillary_Clinton");
  catalog.add("Q568", EntityType::Person, "Donald_Trump");
  catalog.add("Q569", EntityType::Organization, "UNLV");
  return catalog;
}

std::vector<Document> parse_corpus_string(const std::string& text) {
  std::istringstream in(text);
  return parse_corpus(in);
}

}  // namespace

TEST_SUITE("corpus") {

TEST_CASE("parses a document with two sentences") {
  auto docs = parse_corpus_string(
      R"({"id":"d1","sentences":[["a","b"],["c"]]})" "\n");
  REQUIRE(docs.size() == 1);
  CHECK(docs[0].doc_id == "d1");
  REQUIRE(docs[0].sentences.size() == 2);
  CHECK(docs[0].sentences[0] == std::vector<std::string>{"a", "b"});
  CHECK(docs[0].sentences[1] == std::vector<std::string>{"c"});
}

TEST_CASE("missing id names the line") {
  std::string text = R"({"id":"d1","sentences":[["a"]]})" "\n"
                     R"({"sentences":[["b"]]})" "\n";
  CHECK_THROWS_WITH_AS(parse_corpus_string(text),
                       doctest::Contains("line 2"), Error);
}

TEST_CASE("duplicate doc id is rejected") {
  std::string text = R"({"id":"d1","sentences":[["a"]]})" "\n"
                     R"({"id":"d1","sentences":[["b"]]})" "\n";
  CHECK_THROWS_WITH_AS(parse_corpus_string(text),
                       doctest::Contains("duplicate doc id"), Error);
}

TEST_CASE("invalid json and shape errors carry line numbers") {
  CHECK_THROWS_WITH_AS(parse_corpus_string("not json\n"),
                       doctest::Contains("line 1"), Error);
  CHECK_THROWS_WITH_AS(parse_corpus_string(R"({"id":"d","sentences":[]})" "\n"),
                       doctest::Contains("sentences"), Error);
  CHECK_THROWS_WITH_AS(parse_corpus_string(R"({"id":"d","sentences":[[1]]})" "\n"),
                       doctest::Contains("token"), Error);
}

TEST_CASE("corpus round-trips through write and parse") {
  Rng rng(11);
  std::vector<Document> docs;
  for (size_t d = 0; d < 20; ++d) {
    Document doc;
    doc.doc_id = testutil::padded("d", d);
    size_t n_sentences = 1 + rng.bounded(5);
    for (size_t s = 0; s < n_sentences; ++s) {
      std::vector<std::string> tokens;
      size_t n_tokens = rng.bounded(6);  // empty sentences tolerated
      for (size_t t = 0; t < n_tokens; ++t) {
        tokens.push_back("tok" + std::to_string(rng.bounded(50)));
      }
      doc.sentences.push_back(std::move(tokens));
    }
    docs.push_back(std::move(doc));
  }
  std::ostringstream out;
  write_corpus(out, docs);
  auto reparsed = parse_corpus_string(out.str());
  CHECK(reparsed == docs);
}

TEST_CASE("catalog parses tab-separated rows") {
  std::istringstream in("Q567\tPER\tHillary_Clinton\nQ42\tLOC\tBerlin\n");
  EntityCatalog catalog = parse_catalog(in);
  REQUIRE(catalog.size() == 2);
  CHECK(catalog.find("Q567")->type == EntityType::Person);
  CHECK(catalog.find("Q567")->display_name == "Hillary_Clinton");
  CHECK(catalog.type_of("Q42") == EntityType::Location);
}

TEST_CASE("catalog rejects duplicates and unknown types") {
  std::istringstream dup("Q567\tPER\tA\nQ567\tLOC\tB\n");
  CHECK_THROWS_WITH_AS(parse_catalog(dup), doctest::Contains("duplicate"), Error);
  std::istringstream bad("Q42\tXYZ\tname\n");
  CHECK_THROWS_WITH_AS(parse_catalog(bad), doctest::Contains("unknown entity type"),
                       Error);
  std::istringstream fields("Q42\tPER\n");
  CHECK_THROWS_WITH_AS(parse_catalog(fields), doctest::Contains("3 tab-separated"),
                       Error);
}

TEST_CASE("catalog round-trips") {
  EntityCatalog catalog = small_catalog();
  std::ostringstream out;
  write_catalog(out, catalog);
  std::istringstream in(out.str());
  CHECK(parse_catalog(in) == catalog);
}

TEST_CASE("events parse validates against the catalog") {
  EntityCatalog catalog = small_catalog();
  std::istringstream in(
      R"({"id":"e1","entities":["Q567","Q568","Q569"]})" "\n"
      R"({"id":"e2","entities":["Q567"]})" "\n");
  EventsFile events = parse_events(in, catalog);
  REQUIRE(events.events.size() == 1);
  CHECK(events.n_dropped_small == 1);
  CHECK(events.events[0].entities ==
        std::vector<std::string>{"Q567", "Q568", "Q569"});

  std::istringstream unknown(R"({"id":"e","entities":["Q567","Q999"]})" "\n");
  CHECK_THROWS_WITH_AS(parse_events(unknown, catalog),
                       doctest::Contains("Q999"), Error);
}

TEST_CASE("hold-one-out queries for a three-entity event") {
  EntityCatalog catalog = small_catalog();
  std::vector<EventRecord> events = {{"debate", {"Q567", "Q568", "Q569"}}};
  auto queries = generate_queries(events, catalog);
  REQUIRE(queries.size() == 3);

  CHECK(queries[0].target == "Q567");
  CHECK(queries[0].query_entities == std::vector<std::string>{"Q568", "Q569"});
  CHECK(queries[0].target_type == EntityType::Person);
  CHECK(queries[1].target == "Q568");
  CHECK(queries[1].query_entities == std::vector<std::string>{"Q567", "Q569"});
  CHECK(queries[2].target == "Q569");
  CHECK(queries[2].query_entities == std::vector<std::string>{"Q567", "Q568"});
  CHECK(queries[2].target_type == EntityType::Organization);
}

TEST_CASE("two-entity events yield two single-entity queries") {
  EntityCatalog catalog = small_catalog();
  std::vector<EventRecord> events = {{"e", {"Q567", "Q568"}}};
  auto queries = generate_queries(events, catalog);
  REQUIRE(queries.size() == 2);
  for (const auto& q : queries) CHECK(q.query_entities.size() == 1);
}

TEST_CASE("query generation covers each member exactly k times") {
  Rng rng(3);
  EntityCatalog catalog;
  std::vector<EventRecord> events;
  for (size_t e = 0; e < 12; ++e) {
    EventRecord event;
    event.event_id = testutil::padded("e", e);
    size_t k = 2 + rng.bounded(4);
    for (size_t m = 0; m < k; ++m) {
      std::string id = testutil::padded("e", e) + "m" + std::to_string(m);
      catalog.add(id, EntityType::Person, id);
      event.entities.push_back(id);
    }
    events.push_back(std::move(event));
  }

  auto queries = generate_queries(events, catalog);
  size_t expected = 0;
  for (const auto& event : events) expected += event.entities.size();
  CHECK(queries.size() == expected);

  for (const auto& event : events) {
    std::map<std::string, size_t> appearances;
    for (const auto& q : queries) {
      if (q.event_id != event.event_id) continue;
      ++appearances[q.target];
      for (const auto& qe : q.query_entities) ++appearances[qe];
    }
    for (const auto& member : event.entities) {
      CHECK(appearances[member] == event.entities.size());
    }
  }
}

TEST_CASE("filter drops targets missing from any model") {
  EntityCatalog catalog = small_catalog();
  std::vector<EventRecord> events = {{"e", {"Q567", "Q568", "Q569"}}};
  auto queries = generate_queries(events, catalog);

  std::vector<VocabularyView> models;
  models.push_back({"full", [](const std::string&) { return true; }});
  models.push_back({"no567", [](const std::string& id) { return id != "Q567"; }});

  FilterResult result = filter_queries(queries, models);
  REQUIRE(result.retained.size() == 2);
  for (const auto& q : result.retained) CHECK(q.target != "Q567");
  CHECK(result.per_model[0].target_missing == 0);
  CHECK(result.per_model[1].target_missing == 1);
}

TEST_CASE("filter set-intersection example retains 3 of 5") {
  EntityCatalog catalog;
  std::vector<Query> queries;
  for (size_t i = 0; i < 5; ++i) {
    std::string target = "T" + std::to_string(i);
    catalog.add(target, EntityType::Person, target);
    Query q;
    q.event_id = "e";
    q.target = target;
    q.target_type = EntityType::Person;
    q.query_entities = {"A"};
    queries.push_back(q);
  }
  std::vector<VocabularyView> models;
  models.push_back({"partial", [](const std::string& id) {
                      return id != "T1" && id != "T3";
                    }});
  FilterResult result = filter_queries(queries, models);
  CHECK(result.retained.size() == 3);
  CHECK(result.per_model[0].target_missing == 2);
}

TEST_CASE("filter drops queries with no usable query entity in some model") {
  std::vector<Query> queries(1);
  queries[0].target = "T";
  queries[0].query_entities = {"A", "B"};
  std::vector<VocabularyView> models;
  models.push_back({"targets_only", [](const std::string& id) { return id == "T"; }});
  FilterResult result = filter_queries(queries, models);
  CHECK(result.retained.empty());
  CHECK(result.per_model[0].no_query_entities == 1);
}

TEST_CASE("filter is idempotent and monotone in the model set") {
  Rng rng(17);
  std::vector<Query> queries;
  for (size_t i = 0; i < 40; ++i) {
    Query q;
    q.target = "T" + std::to_string(rng.bounded(12));
    size_t nq = 1 + rng.bounded(3);
    for (size_t j = 0; j < nq; ++j) {
      q.query_entities.push_back("E" + std::to_string(rng.bounded(12)));
    }
    queries.push_back(q);
  }
  auto member_mod = [](uint64_t m) {
    return [m](const std::string& id) {
      return (std::hash<std::string>{}(id) % m) != 0;
    };
  };
  std::vector<VocabularyView> one = {{"m3", member_mod(3)}};
  std::vector<VocabularyView> two = {{"m3", member_mod(3)}, {"m5", member_mod(5)}};

  FilterResult first = filter_queries(queries, one);
  FilterResult again = filter_queries(first.retained, one);
  CHECK(again.retained == first.retained);

  FilterResult superset = filter_queries(queries, two);
  for (const auto& q : superset.retained) {
    CHECK(std::find(first.retained.begin(), first.retained.end(), q) !=
          first.retained.end());
  }
}

TEST_CASE("entity frequencies count mention tokens") {
  EntityCatalog catalog = small_catalog();
  auto docs = parse_corpus_string(
      R"({"id":"d1","sentences":[["Q567","said","Q567"],["the","Q568"]]})" "\n"
      R"({"id":"d2","sentences":[["Q567","met"]]})" "\n"
      R"({"id":"d3","sentences":[["nothing","here"]]})" "\n");
  auto freqs = entity_frequencies(docs, catalog);
  CHECK(freqs.at("Q567") == 3);
  CHECK(freqs.at("Q568") == 1);
  CHECK(freqs.at("Q569") == 0);  // never mentioned
}

TEST_CASE("entity frequencies on an empty corpus are all zero") {
  EntityCatalog catalog = small_catalog();
  auto freqs = entity_frequencies({}, catalog);
  for (const auto& [id, count] : freqs) {
    (void)id;
    CHECK(count == 0);
  }
  CHECK(freqs.size() == catalog.size());
}

}  // TEST_SUITE
