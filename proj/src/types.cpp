#include "multiassoc/types.hpp"

namespace multiassoc {

std::string_view to_string(EntityType type) {
  switch (type) {
    case EntityType::Person:
      return "PER";
    case EntityType::Location:
      return "LOC";
    case EntityType::Organization:
      return "ORG";
  }
  return "?";
}

std::optional<EntityType> entity_type_from_string(std::string_view s) {
  if (s == "PER") return EntityType::Person;
  if (s == "LOC") return EntityType::Location;
  if (s == "ORG") return EntityType::Organization;
  return std::nullopt;
}

void EntityCatalog::add(std::string id, EntityType type, std::string display_name) {
  if (id.empty()) throw Error("catalog: empty entity id");
  auto [it, inserted] =
      entries_.emplace(std::move(id), CatalogEntry{type, std::move(display_name)});
  if (!inserted) throw Error("catalog: duplicate entity id '" + it->first + "'");
}

bool EntityCatalog::contains(std::string_view id) const {
  return entries_.find(id) != entries_.end();
}

const CatalogEntry* EntityCatalog::find(std::string_view id) const {
  auto it = entries_.find(id);
  return it == entries_.end() ? nullptr : &it->second;
}

EntityType EntityCatalog::type_of(std::string_view id) const {
  const CatalogEntry* entry = find(id);
  if (!entry) throw Error("catalog: unknown entity id '" + std::string(id) + "'");
  return entry->type;
}

std::vector<std::string> EntityCatalog::ids(std::optional<EntityType> type) const {
  std::vector<std::string> out;
  for (const auto& [id, entry] : entries_) {
    if (!type || entry.type == *type) out.push_back(id);
  }
  return out;
}

}  // namespace multiassoc
