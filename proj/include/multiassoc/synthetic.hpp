#pragma once

#include <cstdint>

#include "multiassoc/embedding.hpp"
#include "multiassoc/types.hpp"

namespace multiassoc {

struct SyntheticParams {
  uint64_t seed = 1;
  size_t n_entities = 40;
  size_t n_events = 8;
  size_t entities_per_event = 3;
  size_t n_docs = 60;
  /// Chance of an unrelated entity mention per noise slot (two per sentence).
  double noise_rate = 0.1;
  /// Planted embedding dimension.
  size_t dim = 24;
  size_t sentences_per_doc = 4;
  /// Angular offset of member vectors from their event's direction. Kept
  /// small enough that every hold-one-out query is solvable by SUM.
  double jitter = 0.08;
};

struct SyntheticDataset {
  std::vector<Document> corpus;
  EntityCatalog catalog;
  std::vector<EventRecord> events;
  EmbeddingSet embedding;
};

/// Deterministic planted benchmark. Events get disjoint entity sets; each
/// event's members cooccur within a two-sentence span in at least three
/// documents, and their planted vectors cluster around a per-event direction
/// with enough margin that the held-out member is always the SUM nearest
/// neighbor. Noise mentions are sprinkled at noise_rate. Throws Error for
/// infeasible parameters.
SyntheticDataset generate_synthetic(const SyntheticParams& params);

}  // namespace multiassoc
