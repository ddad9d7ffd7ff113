#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "multiassoc/types.hpp"

namespace multiassoc {

/// Vocabulary-indexed table of dense vectors. Immutable after construction;
/// concurrent reads are safe.
class EmbeddingSet {
 public:
  /// Empty set; fill via load() or build().
  EmbeddingSet() = default;

  /// Reads the word2vec text format: a "N D" header, then N lines
  /// "token c1 ... cD". Rejects dimension mismatches, duplicate tokens,
  /// zero vectors, non-finite components, and row-count mismatches.
  static EmbeddingSet load(std::istream& in);

  /// Builds a set in memory, applying the same invariants as load().
  static EmbeddingSet build(
      size_t dim, std::span<const std::pair<std::string, std::vector<double>>> rows);

  /// Writes the text format back out. Components use shortest round-trip
  /// formatting, so load(save(x)) == x exactly.
  void save(std::ostream& out) const;

  size_t dim() const { return dim_; }
  size_t size() const { return tokens_.size(); }

  bool contains(std::string_view token) const;
  std::optional<size_t> row_index(std::string_view token) const;
  std::span<const double> row(size_t index) const;
  /// Throws Error if the token is absent.
  std::span<const double> vector_of(std::string_view token) const;
  const std::vector<std::string>& tokens() const { return tokens_; }

  /// Copy with every row scaled to unit Euclidean norm.
  EmbeddingSet normalized() const;

  bool operator==(const EmbeddingSet& other) const;

 private:
  struct StringHash {
    using is_transparent = void;
    size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };

  size_t dim_ = 0;
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, size_t, StringHash, std::equal_to<>> index_;
  std::vector<double> data_;  // row-major, size() * dim_
};

/// 1 - cos(u, v), clamped to [0, 2] against rounding. Throws
/// DegenerateCombination when either argument has zero norm.
double cosine_distance(std::span<const double> u, std::span<const double> v);

/// The catalog entities present in an embedding's vocabulary, optionally
/// restricted to one type. Candidate universe for ranking.
struct EntityVectorView {
  const EmbeddingSet* embeddings = nullptr;
  std::optional<EntityType> type_filter;
  std::vector<std::string> ids;  // sorted
};

/// Throws Error when the view would be empty.
EntityVectorView entity_view(const EmbeddingSet& set, const EntityCatalog& catalog,
                             std::optional<EntityType> type_filter = {});

}  // namespace multiassoc
