#include <cmath>
#include <sstream>

#include "doctest.h"
#include "multiassoc/corpus.hpp"
#include "multiassoc/network.hpp"
#include "multiassoc/rng.hpp"
#include "testutil.hpp"

using namespace multiassoc;

namespace {

EntityCatalog abc_catalog() {
  EntityCatalog catalog;
  catalog.add("A", EntityType::Person, "A");
  catalog.add("B", EntityType::Person, "B");
  catalog.add("C", EntityType::Location, "C");
  return catalog;
}

Document doc(std::string id, std::vector<std::vector<std::string>> sentences) {
  return Document{std::move(id), std::move(sentences)};
}

// Random corpora over a small entity alphabet.
std::vector<Document> random_corpus(Rng& rng, const EntityCatalog& catalog,
                                    size_t n_docs) {
  std::vector<std::string> ids = catalog.ids();
  std::vector<Document> docs;
  for (size_t d = 0; d < n_docs; ++d) {
    Document document;
    document.doc_id = testutil::padded("d", d);
    size_t n_sentences = 1 + rng.bounded(6);
    for (size_t s = 0; s < n_sentences; ++s) {
      std::vector<std::string> tokens;
      size_t n_tokens = rng.bounded(5);
      for (size_t t = 0; t < n_tokens; ++t) {
        if (rng.bounded(3) == 0) {
          tokens.push_back("filler");
        } else {
          tokens.push_back(ids[rng.bounded(ids.size())]);
        }
      }
      document.sentences.push_back(std::move(tokens));
    }
    docs.push_back(std::move(document));
  }
  return docs;
}

}  // namespace

TEST_SUITE("network") {

TEST_CASE("same-sentence pair weighs 1") {
  auto network = build_network(std::vector<Document>{doc("d", {{"A", "B"}})},
                               abc_catalog());
  CHECK(network.weight("A", "B") == 1.0);
  CHECK(network.weight("B", "A") == 1.0);
  CHECK(network.node_count() == 2);
}

TEST_CASE("mention in two sentences accumulates 1 + 1/3") {
  // A in sentence 0; B in sentences 0 and 2.
  auto network = build_network(
      std::vector<Document>{doc("d", {{"A", "B"}, {}, {"B"}})}, abc_catalog());
  CHECK(std::fabs(network.weight("A", "B") - 4.0 / 3.0) < 1e-12);
}

TEST_CASE("no edges across documents") {
  auto network = build_network(
      std::vector<Document>{doc("d1", {{"A"}}), doc("d2", {{"B"}})}, abc_catalog());
  CHECK(network.weight("A", "B") == 0.0);
  CHECK(network.edge_count() == 0);
}

TEST_CASE("sentence-distance cutoff drops distant pairs") {
  std::vector<Document> corpus{doc("d", {{"A"}, {}, {}, {"B"}})};
  NetworkBuildParams cutoff;
  cutoff.max_sentence_distance = 2;
  CHECK(build_network(corpus, abc_catalog(), cutoff).weight("A", "B") == 0.0);
  NetworkBuildParams wide;
  wide.max_sentence_distance = 3;
  CHECK(build_network(corpus, abc_catalog(), wide).weight("A", "B") == 0.25);
}

TEST_CASE("dedupe collapses repeated mentions within a sentence") {
  std::vector<Document> corpus{doc("d", {{"A", "A", "B"}})};
  auto deduped = build_network(corpus, abc_catalog());
  CHECK(deduped.weight("A", "B") == 1.0);

  NetworkBuildParams raw;
  raw.dedupe_per_sentence = false;
  auto counted = build_network(corpus, abc_catalog(), raw);
  CHECK(counted.weight("A", "B") == 2.0);
}

TEST_CASE("same entity never gets a self edge") {
  auto network = build_network(
      std::vector<Document>{doc("d", {{"A", "A"}, {"A"}})}, abc_catalog());
  CHECK(network.node_count() == 0);
  CHECK(network.weight("A", "A") == 0.0);
}

TEST_CASE("weights are symmetric and positive on random builds") {
  Rng rng(31);
  EntityCatalog catalog = abc_catalog();
  catalog.add("D", EntityType::Organization, "D");
  catalog.add("E", EntityType::Person, "E");
  for (int iter = 0; iter < 10; ++iter) {
    auto corpus = random_corpus(rng, catalog, 8);
    auto network = build_network(corpus, catalog);
    for (const auto& [u, neighbors] : network.adjacency()) {
      for (const auto& [v, w] : neighbors) {
        CHECK(w > 0.0);
        CHECK(network.weight(v, u) == w);
        CHECK(u != v);
      }
    }
  }
}

TEST_CASE("document order does not matter") {
  Rng rng(37);
  EntityCatalog catalog = abc_catalog();
  auto corpus = random_corpus(rng, catalog, 12);
  auto reference = build_network(corpus, catalog);
  for (int iter = 0; iter < 5; ++iter) {
    auto shuffled = corpus;
    rng.shuffle(shuffled);
    CHECK(build_network(shuffled, catalog) == reference);
  }
}

TEST_CASE("weights add over disjoint corpus splits") {
  Rng rng(41);
  EntityCatalog catalog = abc_catalog();
  catalog.add("D", EntityType::Organization, "D");
  auto corpus = random_corpus(rng, catalog, 14);
  std::vector<Document> first(corpus.begin(), corpus.begin() + 6);
  std::vector<Document> second(corpus.begin() + 6, corpus.end());

  auto whole = build_network(corpus, catalog);
  auto part_a = build_network(first, catalog);
  auto part_b = build_network(second, catalog);

  for (const auto& [u, neighbors] : whole.adjacency()) {
    for (const auto& [v, w] : neighbors) {
      CHECK(std::fabs(w - (part_a.weight(u, v) + part_b.weight(u, v))) < 1e-12);
    }
  }
  // And nothing extra in the parts.
  for (const auto& [u, neighbors] : part_a.adjacency()) {
    for (const auto& [v, w] : neighbors) {
      (void)w;
      CHECK(whole.weight(u, v) > 0.0);
    }
  }
}

TEST_CASE("adding a document never decreases a weight") {
  Rng rng(43);
  EntityCatalog catalog = abc_catalog();
  auto corpus = random_corpus(rng, catalog, 10);
  auto before = build_network(
      std::span<const Document>(corpus.data(), corpus.size() - 1), catalog);
  auto after = build_network(corpus, catalog);
  for (const auto& [u, neighbors] : before.adjacency()) {
    for (const auto& [v, w] : neighbors) {
      CHECK(after.weight(u, v) >= w);
    }
  }
}

TEST_CASE("top neighbors sort by weight then id") {
  CooccurrenceNetwork network;
  network.add_weight("hub", "x", 2.0);
  network.add_weight("hub", "y", 5.0);
  network.add_weight("hub", "z", 2.0);

  NeighborList top2 = top_neighbors(network, "hub", 2);
  REQUIRE(top2.neighbors.size() == 2);
  CHECK(top2.neighbors[0].first == "y");
  CHECK(top2.neighbors[1].first == "x");  // tie with z broken by id

  NeighborList all = top_neighbors(network, "hub", 10);
  CHECK(all.neighbors.size() == 3);

  CHECK(top_neighbors(network, "hub", 0).neighbors.empty());
  CHECK_THROWS_WITH_AS(top_neighbors(network, "ghost", 3),
                       doctest::Contains("unknown entity"), Error);
}

TEST_CASE("save and load round-trip") {
  Rng rng(47);
  EntityCatalog catalog = abc_catalog();
  NetworkBuildParams params;
  params.max_sentence_distance = 4;
  params.dedupe_per_sentence = false;
  auto network = build_network(random_corpus(rng, catalog, 10), catalog, params);

  std::ostringstream out;
  save_network(out, network);
  std::istringstream in(out.str());
  CHECK(load_network(in) == network);
}

TEST_CASE("empty network saves as header only") {
  CooccurrenceNetwork network;
  std::ostringstream out;
  save_network(out, network);
  CHECK(out.str() == "# multiassoc-network v1 maxdist=inf dedupe=1\n");
  std::istringstream in(out.str());
  CHECK(load_network(in) == network);
}

TEST_CASE("load rejects malformed edge lists") {
  std::string header = "# multiassoc-network v1 maxdist=inf dedupe=1\n";
  std::istringstream swapped(header + "b\ta\t1.0\n");
  CHECK_THROWS_WITH_AS(load_network(swapped), doctest::Contains("canonical order"),
                       Error);
  std::istringstream duplicate(header + "a\tb\t1.0\na\tb\t2.0\n");
  CHECK_THROWS_WITH_AS(load_network(duplicate), doctest::Contains("duplicate edge"),
                       Error);
  std::istringstream negative(header + "a\tb\t-1.0\n");
  CHECK_THROWS_WITH_AS(load_network(negative), doctest::Contains("line 2"), Error);
  std::istringstream short_line(header + "a\tb\n");
  CHECK_THROWS_WITH_AS(load_network(short_line), doctest::Contains("3 fields"), Error);
  std::istringstream bad_header("# other-format v9\n");
  CHECK_THROWS_WITH_AS(load_network(bad_header), doctest::Contains("header"), Error);
}

}  // TEST_SUITE
