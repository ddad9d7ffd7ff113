#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "multiassoc/embedding.hpp"
#include "multiassoc/network.hpp"
#include "multiassoc/types.hpp"

namespace multiassoc {

/// How the query entities' vectors are combined into one candidate score.
enum class CombinationMode { Sum, Avg, MinMax, CwMin, CwMax, CwMult };

inline constexpr std::array<CombinationMode, 6> all_combination_modes = {
    CombinationMode::Sum,   CombinationMode::Avg,   CombinationMode::MinMax,
    CombinationMode::CwMin, CombinationMode::CwMax, CombinationMode::CwMult};

std::string_view to_string(CombinationMode mode);
std::optional<CombinationMode> combination_mode_from_string(std::string_view s);

using VecView = std::span<const double>;

/// The single reduced vector for AVG / CWMIN / CWMAX / CWMULT. The result
/// may be the zero vector; callers must treat that as a degenerate
/// combination. SUM and MINMAX have no combined vector and throw.
std::vector<double> combine_query_vectors(CombinationMode mode,
                                          std::span<const VecView> query_vectors);

/// Distance-like score of one candidate against the query vectors:
///   SUM     sum of cosine distances to every query vector
///   MINMAX  maximum cosine distance over the query vectors
///   AVG     cosine distance to the mean query vector
///   CWMIN   cosine distance to the component-wise minimum
///   CWMAX   cosine distance to the component-wise maximum
///   CWMULT  cosine distance to the component-wise product
/// Throws DegenerateCombination when the combined vector has zero norm.
double combine_score(CombinationMode mode, std::span<const VecView> query_vectors,
                     VecView candidate);

/// A full candidate ranking for one query. Sorted ascending by score
/// (lower is better), ties broken lexicographically by entity ID.
/// failure is set if and only if the ranking is empty.
struct RankedResult {
  Query query;
  std::vector<std::pair<std::string, double>> ranking;
  std::optional<std::string> failure;
  /// Query entities without a vector, dropped from the query side.
  std::vector<std::string> dropped_query_entities;

  bool failed() const { return failure.has_value(); }
};

/// Ranks every view candidate except the query entities. Query entities
/// without a vector are dropped (and recorded); when none remain the result
/// fails with "query out of vocabulary". Query vectors are consumed in
/// sorted entity-ID order, so permuting the query leaves the result
/// byte-identical.
RankedResult rank_embedding(const Query& query, CombinationMode mode,
                            const EntityVectorView& view,
                            const EmbeddingSet& embeddings);

/// Network baseline: candidate score is the summed edge weight to the query
/// entities. Candidates come from the catalog, restricted to the target
/// type unless untyped is set. Scores are stored negated so that the
/// ascending-sort invariant of RankedResult holds (heavier is better);
/// candidates with no edge to any query entity score 0 and rank last.
RankedResult rank_network(const Query& query, const CooccurrenceNetwork& network,
                          const EntityCatalog& catalog, bool untyped = false);

/// Testing oracle: the same contract as rank_embedding, evaluated as
/// literally as possible with no shared computation (the combined vector is
/// rebuilt for every candidate). Kept independent of the production path.
RankedResult brute_force_rank(const Query& query, CombinationMode mode,
                              const EntityVectorView& view,
                              const EmbeddingSet& embeddings);

}  // namespace multiassoc
