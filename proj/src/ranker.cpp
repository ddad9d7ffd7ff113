#include "multiassoc/ranker.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace multiassoc {

std::string_view to_string(CombinationMode mode) {
  switch (mode) {
    case CombinationMode::Sum:
      return "SUM";
    case CombinationMode::Avg:
      return "AVG";
    case CombinationMode::MinMax:
      return "MINMAX";
    case CombinationMode::CwMin:
      return "CWMIN";
    case CombinationMode::CwMax:
      return "CWMAX";
    case CombinationMode::CwMult:
      return "CWMULT";
  }
  return "?";
}

std::optional<CombinationMode> combination_mode_from_string(std::string_view s) {
  for (CombinationMode mode : all_combination_modes) {
    if (s == to_string(mode)) return mode;
  }
  return std::nullopt;
}

namespace {

bool has_combined_vector(CombinationMode mode) {
  return mode == CombinationMode::Avg || mode == CombinationMode::CwMin ||
         mode == CombinationMode::CwMax || mode == CombinationMode::CwMult;
}

bool is_zero(std::span<const double> v) {
  double norm_sq = 0.0;
  for (double x : v) norm_sq += x * x;
  return norm_sq == 0.0;
}

void sort_ranking(std::vector<std::pair<std::string, double>>& ranking) {
  std::sort(ranking.begin(), ranking.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second < b.second;
    return a.first < b.first;
  });
}

}  // namespace

std::vector<double> combine_query_vectors(CombinationMode mode,
                                          std::span<const VecView> query_vectors) {
  if (query_vectors.empty()) throw Error("combine_query_vectors: no query vectors");
  if (!has_combined_vector(mode)) {
    throw Error("combine_query_vectors: mode " + std::string(to_string(mode)) +
                " has no combined vector");
  }
  size_t dim = query_vectors.front().size();
  for (const auto& q : query_vectors) {
    if (q.size() != dim) throw Error("combine_query_vectors: dimension mismatch");
  }

  std::vector<double> combined(query_vectors.front().begin(),
                               query_vectors.front().end());
  for (size_t qi = 1; qi < query_vectors.size(); ++qi) {
    const auto& q = query_vectors[qi];
    for (size_t i = 0; i < dim; ++i) {
      switch (mode) {
        case CombinationMode::Avg:
          combined[i] += q[i];
          break;
        case CombinationMode::CwMin:
          combined[i] = std::min(combined[i], q[i]);
          break;
        case CombinationMode::CwMax:
          combined[i] = std::max(combined[i], q[i]);
          break;
        case CombinationMode::CwMult:
          combined[i] *= q[i];
          break;
        default:
          break;
      }
    }
  }
  if (mode == CombinationMode::Avg) {
    double inv = 1.0 / static_cast<double>(query_vectors.size());
    for (double& x : combined) x *= inv;
  }
  return combined;
}

double combine_score(CombinationMode mode, std::span<const VecView> query_vectors,
                     VecView candidate) {
  if (query_vectors.empty()) throw Error("combine_score: no query vectors");
  switch (mode) {
    case CombinationMode::Sum: {
      double total = 0.0;
      for (const auto& q : query_vectors) total += cosine_distance(q, candidate);
      return total;
    }
    case CombinationMode::MinMax: {
      double worst = 0.0;
      for (const auto& q : query_vectors) {
        worst = std::max(worst, cosine_distance(q, candidate));
      }
      return worst;
    }
    default: {
      auto combined = combine_query_vectors(mode, query_vectors);
      if (is_zero(combined)) throw DegenerateCombination("degenerate combination");
      return cosine_distance(combined, candidate);
    }
  }
}

RankedResult rank_embedding(const Query& query, CombinationMode mode,
                            const EntityVectorView& view,
                            const EmbeddingSet& embeddings) {
  if (view.embeddings != &embeddings) {
    throw Error("rank_embedding: view does not belong to this embedding set");
  }

  RankedResult result;
  result.query = query;

  // Query vectors in sorted entity order: SUM and AVG accumulate floating
  // point, so a canonical order keeps permuted queries bit-identical.
  std::vector<std::string> sorted_query = query.query_entities;
  std::sort(sorted_query.begin(), sorted_query.end());

  std::vector<VecView> query_vectors;
  for (const auto& qe : sorted_query) {
    if (auto idx = embeddings.row_index(qe)) {
      query_vectors.push_back(embeddings.row(*idx));
    } else {
      result.dropped_query_entities.push_back(qe);
    }
  }
  if (query_vectors.empty()) {
    result.failure = "query out of vocabulary";
    return result;
  }

  std::vector<double> combined;
  if (has_combined_vector(mode)) {
    combined = combine_query_vectors(mode, query_vectors);
    if (is_zero(combined)) {
      result.failure = "degenerate combination";
      return result;
    }
  }

  const std::unordered_set<std::string> excluded(query.query_entities.begin(),
                                                 query.query_entities.end());
  result.ranking.reserve(view.ids.size());
  for (const auto& id : view.ids) {
    if (excluded.contains(id)) continue;
    VecView candidate = embeddings.row(*embeddings.row_index(id));
    double score = 0.0;
    switch (mode) {
      case CombinationMode::Sum:
        for (const auto& q : query_vectors) score += cosine_distance(q, candidate);
        break;
      case CombinationMode::MinMax:
        for (const auto& q : query_vectors) {
          score = std::max(score, cosine_distance(q, candidate));
        }
        break;
      default:
        score = cosine_distance(combined, candidate);
        break;
    }
    result.ranking.emplace_back(id, score);
  }

  if (result.ranking.empty()) {
    result.failure = "no candidates";
    return result;
  }
  sort_ranking(result.ranking);
  return result;
}

RankedResult rank_network(const Query& query, const CooccurrenceNetwork& network,
                          const EntityCatalog& catalog, bool untyped) {
  RankedResult result;
  result.query = query;

  bool any_in_network = false;
  for (const auto& qe : query.query_entities) {
    if (network.has_node(qe)) {
      any_in_network = true;
      break;
    }
  }
  if (!any_in_network) {
    result.failure = "query not in network";
    return result;
  }

  const std::unordered_set<std::string> excluded(query.query_entities.begin(),
                                                 query.query_entities.end());
  for (const auto& [id, entry] : catalog.entries()) {
    if (!untyped && entry.type != query.target_type) continue;
    if (excluded.contains(id)) continue;
    double total = 0.0;
    for (const auto& qe : query.query_entities) total += network.weight(qe, id);
    // Heavier is better; negate so the ascending-sort invariant holds.
    // Zero-weight candidates keep exactly 0.0 and therefore rank last.
    result.ranking.emplace_back(id, total == 0.0 ? 0.0 : -total);
  }

  if (result.ranking.empty()) {
    result.failure = "no candidates";
    return result;
  }
  sort_ranking(result.ranking);
  return result;
}

// ---------------------------------------------------------------------------
// Brute-force oracle. Everything below is deliberately self-contained: its
// own cosine distance, its own per-candidate combination, its own sort.

namespace {

double bf_cosine_distance(const std::vector<double>& u, const std::vector<double>& v) {
  double dot = 0.0;
  double uu = 0.0;
  double vv = 0.0;
  for (size_t i = 0; i < u.size(); ++i) {
    dot = dot + u[i] * v[i];
    uu = uu + u[i] * u[i];
    vv = vv + v[i] * v[i];
  }
  if (uu == 0.0 || vv == 0.0) {
    throw DegenerateCombination("cosine distance undefined for zero vector");
  }
  double d = 1.0 - dot / (std::sqrt(uu) * std::sqrt(vv));
  if (d < 0.0) d = 0.0;
  if (d > 2.0) d = 2.0;
  return d;
}

std::vector<double> bf_combined_vector(CombinationMode mode,
                                       const std::vector<std::vector<double>>& qs) {
  size_t dim = qs.front().size();
  std::vector<double> out(dim, 0.0);
  for (size_t i = 0; i < dim; ++i) {
    switch (mode) {
      case CombinationMode::Avg: {
        double s = 0.0;
        for (const auto& q : qs) s = s + q[i];
        out[i] = s / static_cast<double>(qs.size());
        break;
      }
      case CombinationMode::CwMin: {
        double m = qs.front()[i];
        for (const auto& q : qs) m = q[i] < m ? q[i] : m;
        out[i] = m;
        break;
      }
      case CombinationMode::CwMax: {
        double m = qs.front()[i];
        for (const auto& q : qs) m = q[i] > m ? q[i] : m;
        out[i] = m;
        break;
      }
      case CombinationMode::CwMult: {
        double p = 1.0;
        for (const auto& q : qs) p = p * q[i];
        out[i] = p;
        break;
      }
      default:
        throw Error("bf_combined_vector: mode has no combined vector");
    }
  }
  return out;
}

bool bf_is_zero(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s == 0.0;
}

}  // namespace

RankedResult brute_force_rank(const Query& query, CombinationMode mode,
                              const EntityVectorView& view,
                              const EmbeddingSet& embeddings) {
  if (view.embeddings != &embeddings) {
    throw Error("brute_force_rank: view does not belong to this embedding set");
  }

  RankedResult result;
  result.query = query;

  std::vector<std::string> sorted_query = query.query_entities;
  std::sort(sorted_query.begin(), sorted_query.end());

  std::vector<std::vector<double>> query_vectors;
  for (const auto& qe : sorted_query) {
    if (auto idx = embeddings.row_index(qe)) {
      auto row = embeddings.row(*idx);
      query_vectors.emplace_back(row.begin(), row.end());
    } else {
      result.dropped_query_entities.push_back(qe);
    }
  }
  if (query_vectors.empty()) {
    result.failure = "query out of vocabulary";
    return result;
  }

  bool combined_mode = mode == CombinationMode::Avg || mode == CombinationMode::CwMin ||
                       mode == CombinationMode::CwMax || mode == CombinationMode::CwMult;
  if (combined_mode && bf_is_zero(bf_combined_vector(mode, query_vectors))) {
    result.failure = "degenerate combination";
    return result;
  }

  for (const auto& id : view.ids) {
    bool is_query_entity = false;
    for (const auto& qe : query.query_entities) {
      if (qe == id) is_query_entity = true;
    }
    if (is_query_entity) continue;

    auto row = embeddings.row(*embeddings.row_index(id));
    std::vector<double> candidate(row.begin(), row.end());

    double score = 0.0;
    if (mode == CombinationMode::Sum) {
      for (const auto& q : query_vectors) {
        score = score + bf_cosine_distance(q, candidate);
      }
    } else if (mode == CombinationMode::MinMax) {
      bool first = true;
      for (const auto& q : query_vectors) {
        double d = bf_cosine_distance(q, candidate);
        if (first || d > score) score = d;
        first = false;
      }
    } else {
      // Rebuilt for every candidate on purpose; no shared computation.
      std::vector<double> combined = bf_combined_vector(mode, query_vectors);
      score = bf_cosine_distance(combined, candidate);
    }
    result.ranking.emplace_back(id, score);
  }

  if (result.ranking.empty()) {
    result.failure = "no candidates";
    return result;
  }
  std::stable_sort(result.ranking.begin(), result.ranking.end(),
                   [](const auto& a, const auto& b) {
                     if (a.second < b.second) return true;
                     if (b.second < a.second) return false;
                     return a.first < b.first;
                   });
  return result;
}

}  // namespace multiassoc
