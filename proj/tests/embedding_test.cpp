#include <cmath>
#include <sstream>

#include "doctest.h"
#include "multiassoc/embedding.hpp"
#include "multiassoc/rng.hpp"
#include "testutil.hpp"

using namespace multiassoc;

namespace {

EmbeddingSet load_string(const std::string& text) {
  std::istringstream in(text);
  return EmbeddingSet::load(in);
}

EmbeddingSet random_set(Rng& rng, size_t n, size_t dim) {
  std::vector<std::pair<std::string, std::vector<double>>> rows;
  for (size_t i = 0; i < n; ++i) {
    std::vector<double> v(dim);
    for (auto& x : v) x = rng.uniform(-2.0, 2.0);
    v[0] += 0.5;  // keep away from zero
    rows.emplace_back(testutil::padded("w", i), std::move(v));
  }
  return EmbeddingSet::build(dim, rows);
}

}  // namespace

TEST_SUITE("embedding") {

TEST_CASE("loads the text format") {
  EmbeddingSet set = load_string("2 3\nfoo 1 2 3\nbar 0.5 -1 0\n");
  CHECK(set.size() == 2);
  CHECK(set.dim() == 3);
  REQUIRE(set.contains("foo"));
  auto row = set.vector_of("bar");
  CHECK(row[0] == 0.5);
  CHECK(row[1] == -1.0);
  CHECK(row[2] == 0.0);
}

TEST_CASE("load rejects malformed input") {
  CHECK_THROWS_WITH_AS(load_string("2 3\nfoo 1 2\nbar 1 2 3\n"),
                       doctest::Contains("line 2"), Error);
  CHECK_THROWS_WITH_AS(load_string("1 3\nQ1 0 0 0\n"),
                       doctest::Contains("zero vector"), Error);
  CHECK_THROWS_WITH_AS(load_string("2 2\nfoo 1 2\nfoo 3 4\n"),
                       doctest::Contains("duplicate token"), Error);
  CHECK_THROWS_WITH_AS(load_string("3 2\nfoo 1 2\nbar 3 4\n"),
                       doctest::Contains("expected 3 rows"), Error);
  CHECK_THROWS_WITH_AS(load_string("1 2\nfoo 1 2\nbar 3 4\n"),
                       doctest::Contains("more rows"), Error);
  CHECK_THROWS_WITH_AS(load_string("hello\n"), doctest::Contains("header"), Error);
  CHECK_THROWS_WITH_AS(load_string("1 2\nfoo 1 nope\n"),
                       doctest::Contains("bad component"), Error);
}

TEST_CASE("save and load round-trip exactly") {
  Rng rng(5);
  EmbeddingSet set = random_set(rng, 30, 7);
  std::ostringstream out;
  set.save(out);
  EmbeddingSet reloaded = load_string(out.str());
  CHECK(reloaded == set);
}

TEST_CASE("cosine distance basics") {
  std::vector<double> e1 = {1, 0}, e2 = {0, 1}, anti = {-2, 0}, c = {0.6, 0.8};
  CHECK(cosine_distance(e1, e1) == 0.0);
  CHECK(cosine_distance(e1, e2) == 1.0);
  CHECK(cosine_distance(e1, anti) == 2.0);
  CHECK(cosine_distance(e1, c) == doctest::Approx(0.4).epsilon(1e-12));
  std::vector<double> zero = {0, 0};
  CHECK_THROWS_AS(cosine_distance(e1, zero), DegenerateCombination);
  std::vector<double> bad_dim = {1, 0, 0};
  CHECK_THROWS_AS(cosine_distance(e1, bad_dim), Error);
}

TEST_CASE("cosine distance is symmetric and scale invariant") {
  Rng rng(23);
  for (int iter = 0; iter < 200; ++iter) {
    size_t dim = 2 + rng.bounded(15);
    std::vector<double> u(dim), v(dim);
    for (auto& x : u) x = rng.uniform(-1.0, 1.0);
    for (auto& x : v) x = rng.uniform(-1.0, 1.0);
    u[0] += 0.25;
    v[0] -= 0.25;
    double d = cosine_distance(u, v);
    CHECK(d == cosine_distance(v, u));
    CHECK(d >= 0.0);
    CHECK(d <= 2.0);

    double scale = rng.uniform(0.1, 10.0);
    std::vector<double> u_scaled = u;
    for (auto& x : u_scaled) x *= scale;
    CHECK(cosine_distance(u_scaled, v) == doctest::Approx(d).epsilon(1e-9));
  }
}

TEST_CASE("normalize produces unit rows and keeps distances") {
  EmbeddingSet set = load_string("2 2\na 3 4\nb 1 1\n");
  EmbeddingSet unit = set.normalized();
  auto a = unit.vector_of("a");
  CHECK(a[0] == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(a[1] == doctest::Approx(0.8).epsilon(1e-12));

  Rng rng(7);
  EmbeddingSet bigger = random_set(rng, 40, 9);
  EmbeddingSet normalized = bigger.normalized();
  for (size_t i = 0; i < bigger.size(); ++i) {
    for (size_t j = i + 1; j < bigger.size(); ++j) {
      double before = cosine_distance(bigger.row(i), bigger.row(j));
      double after = cosine_distance(normalized.row(i), normalized.row(j));
      CHECK(after == doctest::Approx(before).epsilon(1e-9));
    }
  }

  // Idempotence.
  EmbeddingSet twice = normalized.normalized();
  for (size_t i = 0; i < normalized.size(); ++i) {
    auto once_row = normalized.row(i);
    auto twice_row = twice.row(i);
    for (size_t d = 0; d < normalized.dim(); ++d) {
      CHECK(std::fabs(once_row[d] - twice_row[d]) < 1e-12);
    }
  }
}

TEST_CASE("entity views intersect catalog and vocabulary") {
  EntityCatalog catalog;
  catalog.add("Q1", EntityType::Person, "p");
  catalog.add("Q2", EntityType::Location, "l");
  EmbeddingSet set = load_string("3 2\nQ1 1 0\nQ2 0 1\ndog 1 1\n");

  EntityVectorView persons = entity_view(set, catalog, EntityType::Person);
  CHECK(persons.ids == std::vector<std::string>{"Q1"});

  EntityVectorView all = entity_view(set, catalog);
  CHECK(all.ids == std::vector<std::string>{"Q1", "Q2"});

  CHECK_THROWS_WITH_AS(entity_view(set, catalog, EntityType::Organization),
                       doctest::Contains("no candidates"), Error);
}

}  // TEST_SUITE
