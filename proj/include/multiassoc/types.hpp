#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "multiassoc/error.hpp"

namespace multiassoc {

enum class EntityType { Person, Location, Organization };

inline constexpr EntityType all_entity_types[] = {
    EntityType::Person, EntityType::Location, EntityType::Organization};

std::string_view to_string(EntityType type);
std::optional<EntityType> entity_type_from_string(std::string_view s);

struct CatalogEntry {
  EntityType type;
  std::string display_name;

  bool operator==(const CatalogEntry&) const = default;
};

/// Maps entity IDs (the tokens that appear inline in the corpus) to their
/// type and display name.
class EntityCatalog {
 public:
  void add(std::string id, EntityType type, std::string display_name);

  bool contains(std::string_view id) const;
  const CatalogEntry* find(std::string_view id) const;
  EntityType type_of(std::string_view id) const;

  const std::map<std::string, CatalogEntry, std::less<>>& entries() const {
    return entries_;
  }
  size_t size() const { return entries_.size(); }

  /// Sorted entity IDs, optionally restricted to one type.
  std::vector<std::string> ids(std::optional<EntityType> type = {}) const;

  bool operator==(const EntityCatalog&) const = default;

 private:
  std::map<std::string, CatalogEntry, std::less<>> entries_;
};

struct Document {
  std::string doc_id;
  std::vector<std::vector<std::string>> sentences;

  bool operator==(const Document&) const = default;
};

/// An event and its participating entities (sorted, at least two).
struct EventRecord {
  std::string event_id;
  std::vector<std::string> entities;

  bool operator==(const EventRecord&) const = default;
};

/// A hold-one-out query: predict `target` from the remaining participants.
struct Query {
  std::string event_id;
  std::vector<std::string> query_entities;
  std::string target;
  EntityType target_type = EntityType::Person;

  bool operator==(const Query&) const = default;
};

}  // namespace multiassoc
