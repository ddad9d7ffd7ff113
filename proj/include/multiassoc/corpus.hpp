#pragma once

#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "multiassoc/types.hpp"

namespace multiassoc {

/// Parses a line-delimited corpus: one JSON record per line with fields
/// "id" (string) and "sentences" (list of lists of token strings).
/// Malformed lines and duplicate ids raise Error with the line number.
std::vector<Document> parse_corpus(std::istream& in);
void write_corpus(std::ostream& out, std::span<const Document> docs);

/// Tab-separated catalog: entity_id, type (PER|LOC|ORG), display_name.
EntityCatalog parse_catalog(std::istream& in);
void write_catalog(std::ostream& out, const EntityCatalog& catalog);

struct EventsFile {
  std::vector<EventRecord> events;
  /// Events with fewer than two distinct entities, dropped at parse.
  size_t n_dropped_small = 0;
};

/// Line-delimited events: JSON records with "id" and "entities". Every
/// entity must resolve in the catalog; events with fewer than two distinct
/// entities are dropped (and counted), mirroring how the ground truth is
/// pruned upstream.
EventsFile parse_events(std::istream& in, const EntityCatalog& catalog);
void write_events(std::ostream& out, std::span<const EventRecord> events);

/// Expands each event into k hold-one-out queries, one per member. Output
/// order is deterministic: event order, then target entity ID order.
std::vector<Query> generate_queries(std::span<const EventRecord> events,
                                    const EntityCatalog& catalog);

/// A model's vocabulary, as far as filtering is concerned.
struct VocabularyView {
  std::string name;
  std::function<bool(const std::string&)> contains;
};

struct ModelDropStats {
  std::string model;
  size_t target_missing = 0;
  size_t no_query_entities = 0;
};

struct FilterResult {
  std::vector<Query> retained;
  std::vector<ModelDropStats> per_model;
  size_t n_input = 0;
};

/// Keeps only queries whose target is present in every model's vocabulary
/// and which keep at least one in-vocabulary query entity per model.
FilterResult filter_queries(std::span<const Query> queries,
                            std::span<const VocabularyView> models);

/// Mention counts per catalog entity across the corpus; entities never
/// mentioned map to 0.
std::map<std::string, uint64_t> entity_frequencies(
    std::span<const Document> corpus, const EntityCatalog& catalog);

}  // namespace multiassoc
