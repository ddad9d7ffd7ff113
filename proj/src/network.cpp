#include "multiassoc/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "multiassoc/parallel.hpp"
#include "multiassoc/text_io.hpp"

namespace multiassoc {

void CooccurrenceNetwork::add_weight(const std::string& u, const std::string& v,
                                     double w) {
  if (u == v) throw Error("network: self-loop on '" + u + "'");
  if (!(w > 0.0) || !std::isfinite(w)) {
    throw Error("network: edge weight must be positive and finite");
  }
  adjacency_[u][v] += w;
  adjacency_[v][u] += w;
}

double CooccurrenceNetwork::weight(std::string_view u, std::string_view v) const {
  auto it = adjacency_.find(u);
  if (it == adjacency_.end()) return 0.0;
  auto jt = it->second.find(std::string(v));
  return jt == it->second.end() ? 0.0 : jt->second;
}

bool CooccurrenceNetwork::has_node(std::string_view id) const {
  return adjacency_.find(id) != adjacency_.end();
}

size_t CooccurrenceNetwork::edge_count() const {
  size_t degree_sum = 0;
  for (const auto& [node, nbrs] : adjacency_) degree_sum += nbrs.size();
  return degree_sum / 2;
}

std::vector<std::string> CooccurrenceNetwork::nodes() const {
  std::vector<std::string> out;
  out.reserve(adjacency_.size());
  for (const auto& [node, nbrs] : adjacency_) out.push_back(node);
  return out;
}

namespace {

using PairWeights = std::map<std::pair<std::string, std::string>, double>;

// Entity mentions of one document, bucketed per sentence. With dedupe on,
// each entity counts once per sentence.
std::vector<std::map<std::string, uint32_t>> sentence_mentions(
    const Document& doc, const EntityCatalog& catalog, bool dedupe) {
  std::vector<std::map<std::string, uint32_t>> result(doc.sentences.size());
  for (size_t s = 0; s < doc.sentences.size(); ++s) {
    for (const auto& token : doc.sentences[s]) {
      if (!catalog.contains(token)) continue;
      auto [it, inserted] = result[s].emplace(token, 1);
      if (!inserted && !dedupe) ++it->second;
    }
  }
  return result;
}

PairWeights document_weights(const Document& doc, const EntityCatalog& catalog,
                             const NetworkBuildParams& params) {
  PairWeights weights;
  auto mentions = sentence_mentions(doc, catalog, params.dedupe_per_sentence);
  size_t n_sentences = mentions.size();
  for (size_t i = 0; i < n_sentences; ++i) {
    if (mentions[i].empty()) continue;
    size_t max_j = n_sentences - 1;
    if (params.max_sentence_distance) {
      max_j = std::min<size_t>(max_j, i + *params.max_sentence_distance);
    }
    for (size_t j = i; j <= max_j; ++j) {
      if (mentions[j].empty()) continue;
      double contribution = 1.0 / (1.0 + static_cast<double>(j - i));
      if (i == j) {
        // Unordered pairs within one sentence.
        for (auto u = mentions[i].begin(); u != mentions[i].end(); ++u) {
          auto v = u;
          for (++v; v != mentions[i].end(); ++v) {
            weights[{u->first, v->first}] +=
                contribution * static_cast<double>(u->second) *
                static_cast<double>(v->second);
          }
        }
      } else {
        for (const auto& [eu, cu] : mentions[i]) {
          for (const auto& [ev, cv] : mentions[j]) {
            if (eu == ev) continue;
            auto key = eu < ev ? std::make_pair(eu, ev) : std::make_pair(ev, eu);
            weights[key] +=
                contribution * static_cast<double>(cu) * static_cast<double>(cv);
          }
        }
      }
    }
  }
  return weights;
}

}  // namespace

CooccurrenceNetwork build_network(std::span<const Document> corpus,
                                  const EntityCatalog& catalog,
                                  NetworkBuildParams params) {
  // Documents are folded in doc_id order so the result is invariant under
  // permutations of the input.
  std::vector<size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return corpus[a].doc_id < corpus[b].doc_id;
  });

  std::vector<PairWeights> partials(corpus.size());
  parallel_for(corpus.size(), [&](size_t i) {
    partials[i] = document_weights(corpus[order[i]], catalog, params);
  });

  CooccurrenceNetwork network(params);
  for (const auto& partial : partials) {
    for (const auto& [pair, w] : partial) {
      network.add_weight(pair.first, pair.second, w);
    }
  }
  return network;
}

NeighborList top_neighbors(const CooccurrenceNetwork& network,
                           const std::string& entity_id, size_t n) {
  auto it = network.adjacency().find(entity_id);
  if (it == network.adjacency().end()) {
    throw Error("network: unknown entity '" + entity_id + "'");
  }
  NeighborList list;
  list.entity_id = entity_id;
  list.neighbors.assign(it->second.begin(), it->second.end());
  std::sort(list.neighbors.begin(), list.neighbors.end(),
            [](const auto& a, const auto& b) {
              if (a.second != b.second) return a.second > b.second;
              return a.first < b.first;
            });
  if (list.neighbors.size() > n) list.neighbors.resize(n);
  return list;
}

void save_network(std::ostream& out, const CooccurrenceNetwork& network) {
  const auto& params = network.params();
  out << "# multiassoc-network v1 maxdist="
      << (params.max_sentence_distance ? std::to_string(*params.max_sentence_distance)
                                       : std::string("inf"))
      << " dedupe=" << (params.dedupe_per_sentence ? 1 : 0) << '\n';
  for (const auto& [u, nbrs] : network.adjacency()) {
    for (const auto& [v, w] : nbrs) {
      if (u < v) out << u << '\t' << v << '\t' << format_double(w) << '\n';
    }
  }
}

CooccurrenceNetwork load_network(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error("network file is empty");
  strip_cr(line);

  auto header = split_whitespace(line);
  if (header.size() != 5 || header[0] != "#" || header[1] != "multiassoc-network" ||
      header[2] != "v1" || !header[3].starts_with("maxdist=") ||
      !header[4].starts_with("dedupe=")) {
    throw Error("line 1: bad network file header");
  }
  NetworkBuildParams params;
  auto maxdist = header[3].substr(8);
  if (maxdist != "inf") {
    uint64_t value = 0;
    if (!parse_uint(maxdist, value) || value > UINT32_MAX) {
      throw Error("line 1: bad maxdist value");
    }
    params.max_sentence_distance = static_cast<uint32_t>(value);
  }
  auto dedupe = header[4].substr(7);
  if (dedupe != "0" && dedupe != "1") throw Error("line 1: bad dedupe value");
  params.dedupe_per_sentence = (dedupe == "1");

  CooccurrenceNetwork network(params);
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (is_blank(line)) continue;
    auto fields = split(line, '\t');
    if (fields.size() != 3) {
      throw Error("line " + std::to_string(lineno) + ": expected 3 fields");
    }
    std::string u(fields[0]), v(fields[1]);
    if (u.empty() || v.empty()) {
      throw Error("line " + std::to_string(lineno) + ": empty endpoint");
    }
    if (!(u < v)) {
      throw Error("line " + std::to_string(lineno) +
                  ": endpoints not in canonical order (expect u < v)");
    }
    if (network.weight(u, v) != 0.0) {
      throw Error("line " + std::to_string(lineno) + ": duplicate edge " + u + " -- " + v);
    }
    double w = 0.0;
    if (!parse_double(fields[2], w) || !std::isfinite(w) || !(w > 0.0)) {
      throw Error("line " + std::to_string(lineno) + ": bad edge weight '" +
                  std::string(fields[2]) + "'");
    }
    network.add_weight(u, v, w);
  }
  return network;
}

}  // namespace multiassoc
