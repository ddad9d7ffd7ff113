#include "multiassoc/corpus.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "json.hpp"
#include "multiassoc/text_io.hpp"

namespace multiassoc {

namespace {

using nlohmann::json;

std::string at_line(size_t lineno, const std::string& what) {
  return "line " + std::to_string(lineno) + ": " + what;
}

json parse_json_line(const std::string& line, size_t lineno, const char* kind) {
  json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(at_line(lineno, std::string(kind) + " record is not a JSON object"));
  }
  return j;
}

std::string required_string(const json& j, const char* field, size_t lineno) {
  auto it = j.find(field);
  if (it == j.end() || !it->is_string() || it->get<std::string>().empty()) {
    throw Error(at_line(lineno, std::string("missing or empty \"") + field + "\" field"));
  }
  return it->get<std::string>();
}

}  // namespace

std::vector<Document> parse_corpus(std::istream& in) {
  std::vector<Document> docs;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (is_blank(line)) continue;

    json j = parse_json_line(line, lineno, "corpus");
    Document doc;
    doc.doc_id = required_string(j, "id", lineno);

    auto sent_it = j.find("sentences");
    if (sent_it == j.end() || !sent_it->is_array() || sent_it->empty()) {
      throw Error(at_line(lineno, "missing or empty \"sentences\" field"));
    }
    for (const auto& sentence : *sent_it) {
      if (!sentence.is_array()) {
        throw Error(at_line(lineno, "sentence is not a list of tokens"));
      }
      std::vector<std::string> tokens;
      tokens.reserve(sentence.size());
      for (const auto& token : sentence) {
        if (!token.is_string()) throw Error(at_line(lineno, "token is not a string"));
        tokens.push_back(token.get<std::string>());
      }
      doc.sentences.push_back(std::move(tokens));
    }

    if (!seen_ids.insert(doc.doc_id).second) {
      throw Error(at_line(lineno, "duplicate doc id '" + doc.doc_id + "'"));
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

void write_corpus(std::ostream& out, std::span<const Document> docs) {
  for (const auto& doc : docs) {
    json j;
    j["id"] = doc.doc_id;
    j["sentences"] = doc.sentences;
    out << j.dump() << '\n';
  }
}

EntityCatalog parse_catalog(std::istream& in) {
  EntityCatalog catalog;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (is_blank(line)) continue;

    auto fields = split(line, '\t');
    if (fields.size() != 3) {
      throw Error(at_line(lineno, "expected 3 tab-separated fields, got " +
                                      std::to_string(fields.size())));
    }
    if (fields[0].empty()) throw Error(at_line(lineno, "empty entity id"));
    auto type = entity_type_from_string(fields[1]);
    if (!type) {
      throw Error(at_line(lineno, "unknown entity type '" + std::string(fields[1]) + "'"));
    }
    try {
      catalog.add(std::string(fields[0]), *type, std::string(fields[2]));
    } catch (const Error& e) {
      throw Error(at_line(lineno, e.what()));
    }
  }
  return catalog;
}

void write_catalog(std::ostream& out, const EntityCatalog& catalog) {
  for (const auto& [id, entry] : catalog.entries()) {
    out << id << '\t' << to_string(entry.type) << '\t' << entry.display_name << '\n';
  }
}

EventsFile parse_events(std::istream& in, const EntityCatalog& catalog) {
  EventsFile result;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (is_blank(line)) continue;

    json j = parse_json_line(line, lineno, "event");
    EventRecord event;
    event.event_id = required_string(j, "id", lineno);
    if (!seen_ids.insert(event.event_id).second) {
      throw Error(at_line(lineno, "duplicate event id '" + event.event_id + "'"));
    }

    auto ents_it = j.find("entities");
    if (ents_it == j.end() || !ents_it->is_array()) {
      throw Error(at_line(lineno, "missing \"entities\" field"));
    }
    std::set<std::string> entities;
    for (const auto& e : *ents_it) {
      if (!e.is_string()) throw Error(at_line(lineno, "entity id is not a string"));
      std::string id = e.get<std::string>();
      if (!catalog.contains(id)) {
        throw Error(at_line(lineno, "entity '" + id + "' not in catalog"));
      }
      entities.insert(std::move(id));
    }
    if (entities.size() < 2) {
      ++result.n_dropped_small;
      continue;
    }
    event.entities.assign(entities.begin(), entities.end());
    result.events.push_back(std::move(event));
  }
  return result;
}

void write_events(std::ostream& out, std::span<const EventRecord> events) {
  for (const auto& event : events) {
    json j;
    j["entities"] = event.entities;
    j["id"] = event.event_id;
    out << j.dump() << '\n';
  }
}

std::vector<Query> generate_queries(std::span<const EventRecord> events,
                                    const EntityCatalog& catalog) {
  std::vector<Query> queries;
  for (const auto& event : events) {
    if (event.entities.size() < 2) {
      throw Error("event '" + event.event_id + "' has fewer than two entities");
    }
    std::vector<std::string> sorted_members = event.entities;
    std::sort(sorted_members.begin(), sorted_members.end());
    for (const auto& target : sorted_members) {
      Query q;
      q.event_id = event.event_id;
      q.target = target;
      q.target_type = catalog.type_of(target);
      for (const auto& member : sorted_members) {
        if (member != target) q.query_entities.push_back(member);
      }
      queries.push_back(std::move(q));
    }
  }
  return queries;
}

FilterResult filter_queries(std::span<const Query> queries,
                            std::span<const VocabularyView> models) {
  if (models.empty()) throw Error("filter_queries: no vocabulary sets given");

  FilterResult result;
  result.n_input = queries.size();
  result.per_model.reserve(models.size());
  for (const auto& model : models) {
    result.per_model.push_back(ModelDropStats{model.name});
  }

  for (const auto& query : queries) {
    bool drop = false;
    for (size_t m = 0; m < models.size(); ++m) {
      if (!models[m].contains(query.target)) {
        ++result.per_model[m].target_missing;
        drop = true;
      }
      bool any_query_entity = false;
      for (const auto& qe : query.query_entities) {
        if (models[m].contains(qe)) {
          any_query_entity = true;
          break;
        }
      }
      if (!any_query_entity) {
        ++result.per_model[m].no_query_entities;
        drop = true;
      }
    }
    if (!drop) result.retained.push_back(query);
  }
  return result;
}

std::map<std::string, uint64_t> entity_frequencies(std::span<const Document> corpus,
                                                   const EntityCatalog& catalog) {
  std::map<std::string, uint64_t> counts;
  for (const auto& [id, entry] : catalog.entries()) counts.emplace(id, 0);
  for (const auto& doc : corpus) {
    for (const auto& sentence : doc.sentences) {
      for (const auto& token : sentence) {
        auto it = counts.find(token);
        if (it != counts.end()) ++it->second;
      }
    }
  }
  return counts;
}

}  // namespace multiassoc
