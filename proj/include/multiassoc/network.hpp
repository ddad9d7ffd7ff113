#pragma once

#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "multiassoc/types.hpp"

namespace multiassoc {

struct NetworkBuildParams {
  /// Maximum sentence-index gap between two mentions that still produces an
  /// edge contribution. Unset means unlimited within a document.
  std::optional<uint32_t> max_sentence_distance;
  /// When set, repeated mentions of the same entity within one sentence
  /// count once.
  bool dedupe_per_sentence = true;

  bool operator==(const NetworkBuildParams&) const = default;
};

/// Undirected entity graph with positive edge weights accumulated from
/// inverse sentence distances. Nodes exist exactly for edge endpoints.
class CooccurrenceNetwork {
 public:
  CooccurrenceNetwork() = default;
  explicit CooccurrenceNetwork(NetworkBuildParams params) : params_(params) {}

  /// Adds w to both directions of (u, v). Requires u != v and w > 0.
  void add_weight(const std::string& u, const std::string& v, double w);

  /// 0 when the edge is absent.
  double weight(std::string_view u, std::string_view v) const;
  bool has_node(std::string_view id) const;

  size_t node_count() const { return adjacency_.size(); }
  size_t edge_count() const;

  const std::map<std::string, std::map<std::string, double>, std::less<>>&
  adjacency() const {
    return adjacency_;
  }
  std::vector<std::string> nodes() const;

  const NetworkBuildParams& params() const { return params_; }

  bool operator==(const CooccurrenceNetwork&) const = default;

 private:
  NetworkBuildParams params_;
  std::map<std::string, std::map<std::string, double>, std::less<>> adjacency_;
};

/// For every unordered pair of same-document mentions of distinct entities,
/// at sentence gap d <= max_sentence_distance, adds 1/(1+d) to the pair's
/// edge. Deterministic: documents are folded in doc_id order, so the result
/// does not depend on the order documents arrive in.
CooccurrenceNetwork build_network(std::span<const Document> corpus,
                                  const EntityCatalog& catalog,
                                  NetworkBuildParams params = {});

struct NeighborList {
  std::string entity_id;
  /// Descending by weight, ties broken by neighbor ID.
  std::vector<std::pair<std::string, double>> neighbors;
};

/// Top-n neighbors by edge weight; fewer when the degree is smaller.
/// Throws Error for entities not in the network.
NeighborList top_neighbors(const CooccurrenceNetwork& network,
                           const std::string& entity_id, size_t n);

/// Edge-list format: "# multiassoc-network v1 maxdist=<int|inf> dedupe=<0|1>",
/// then one "u<TAB>v<TAB>weight" line per edge with u < v.
void save_network(std::ostream& out, const CooccurrenceNetwork& network);
CooccurrenceNetwork load_network(std::istream& in);

}  // namespace multiassoc
