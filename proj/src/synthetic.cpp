#include "multiassoc/synthetic.hpp"

#include <cmath>
#include <string>

#include "multiassoc/rng.hpp"

namespace multiassoc {

namespace {

// Pairwise |cos| ceiling between planted directions. Together with the
// jitter bound this guarantees a worst-case score margin between the
// held-out member and every other candidate, so SUM always solves the
// planted queries.
constexpr double kDirectionMargin = 0.25;
constexpr size_t kMaxPlacementTries = 20000;

std::string padded_id(char prefix, size_t index, size_t width) {
  std::string digits = std::to_string(index);
  std::string out(1, prefix);
  out.append(width > digits.size() ? width - digits.size() : 0, '0');
  out += digits;
  return out;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> place_direction(Rng& rng, size_t dim,
                                    const std::vector<std::vector<double>>& existing) {
  for (size_t attempt = 0; attempt < kMaxPlacementTries; ++attempt) {
    std::vector<double> v = rng.unit_vector(dim);
    bool ok = true;
    for (const auto& other : existing) {
      if (std::fabs(dot(v, other)) > kDirectionMargin) {
        ok = false;
        break;
      }
    }
    if (ok) return v;
  }
  throw Error(
      "infeasible parameters: cannot place well-separated directions; "
      "increase dim or reduce n_events");
}

void validate(const SyntheticParams& p) {
  if (p.n_entities == 0 || p.n_events == 0 || p.n_docs == 0 || p.dim == 0) {
    throw Error("infeasible parameters: counts must be positive");
  }
  if (p.entities_per_event < 2) {
    throw Error("infeasible parameters: entities_per_event must be at least 2");
  }
  if (p.n_events * p.entities_per_event > p.n_entities) {
    throw Error("infeasible parameters: events need " +
                std::to_string(p.n_events * p.entities_per_event) +
                " entities, have " + std::to_string(p.n_entities));
  }
  if (p.n_docs < 3 * p.n_events) {
    throw Error("infeasible parameters: need at least 3 documents per event");
  }
  if (p.noise_rate < 0.0 || p.noise_rate > 1.0) {
    throw Error("infeasible parameters: noise_rate must be in [0, 1]");
  }
  if (p.sentences_per_doc < 2) {
    throw Error("infeasible parameters: sentences_per_doc must be at least 2");
  }
  if (!(p.jitter > 0.0) || p.jitter > 0.2) {
    throw Error("infeasible parameters: jitter must be in (0, 0.2]");
  }
}

}  // namespace

SyntheticDataset generate_synthetic(const SyntheticParams& params) {
  validate(params);
  Rng rng(params.seed);

  SyntheticDataset data;
  size_t id_width = std::to_string(params.n_entities).size();

  std::vector<std::string> entity_ids(params.n_entities);
  for (size_t i = 0; i < params.n_entities; ++i) {
    entity_ids[i] = padded_id('Q', i + 1, id_width);
    EntityType type = all_entity_types[i % 3];
    data.catalog.add(entity_ids[i], type, "Entity_" + std::to_string(i + 1));
  }

  // Disjoint events over the leading entities; the rest are distractors.
  size_t event_width = std::to_string(params.n_events).size();
  for (size_t j = 0; j < params.n_events; ++j) {
    EventRecord event;
    event.event_id = padded_id('E', j + 1, event_width);
    for (size_t m = 0; m < params.entities_per_event; ++m) {
      event.entities.push_back(entity_ids[j * params.entities_per_event + m]);
    }
    data.events.push_back(std::move(event));
  }

  // Planted vectors: one well-separated direction per event, members
  // jittered around it; distractor entities get their own directions, also
  // kept away from every event direction.
  std::vector<std::vector<double>> event_dirs;
  for (size_t j = 0; j < params.n_events; ++j) {
    event_dirs.push_back(place_direction(rng, params.dim, event_dirs));
  }

  size_t n_members = params.n_events * params.entities_per_event;
  std::vector<std::pair<std::string, std::vector<double>>> rows;
  rows.reserve(params.n_entities);
  for (size_t i = 0; i < params.n_entities; ++i) {
    std::vector<double> v;
    if (i < n_members) {
      v = event_dirs[i / params.entities_per_event];
      std::vector<double> offset = rng.unit_vector(params.dim);
      for (size_t d = 0; d < params.dim; ++d) v[d] += params.jitter * offset[d];
    } else {
      v = place_direction(rng, params.dim, event_dirs);
    }
    double norm = std::sqrt(dot(v, v));
    for (double& x : v) x /= norm;
    rows.emplace_back(entity_ids[i], std::move(v));
  }
  data.embedding = EmbeddingSet::build(params.dim, rows);

  // Corpus: document d features event d % n_events; members are split over
  // the first two sentences, so every member pair sits within a
  // two-sentence span. Noise slots sprinkle unrelated entity mentions.
  size_t doc_width = std::to_string(params.n_docs).size();
  for (size_t d = 0; d < params.n_docs; ++d) {
    Document doc;
    doc.doc_id = padded_id('D', d + 1, doc_width);
    const EventRecord& event = data.events[d % params.n_events];
    size_t half = (event.entities.size() + 1) / 2;

    for (size_t s = 0; s < params.sentences_per_doc; ++s) {
      std::vector<std::string> tokens;
      tokens.push_back("t" + std::to_string(rng.bounded(100)));
      if (s == 0) {
        tokens.insert(tokens.end(), event.entities.begin(),
                      event.entities.begin() + half);
      } else if (s == 1) {
        tokens.insert(tokens.end(), event.entities.begin() + half,
                      event.entities.end());
      }
      for (int slot = 0; slot < 2; ++slot) {
        if (rng.uniform01() < params.noise_rate) {
          tokens.push_back(entity_ids[rng.bounded(params.n_entities)]);
        }
      }
      tokens.push_back("t" + std::to_string(rng.bounded(100)));
      doc.sentences.push_back(std::move(tokens));
    }
    data.corpus.push_back(std::move(doc));
  }

  return data;
}

}  // namespace multiassoc
