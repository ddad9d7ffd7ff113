#include "multiassoc/embedding.hpp"

#include <algorithm>
#include <cmath>

#include "multiassoc/text_io.hpp"

namespace multiassoc {

namespace {

double squared_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

}  // namespace

EmbeddingSet EmbeddingSet::load(std::istream& in) {
  std::string line;
  size_t lineno = 0;

  if (!std::getline(in, line)) throw Error("embedding file is empty");
  ++lineno;
  strip_cr(line);
  auto header = split_whitespace(line);
  uint64_t n_rows = 0, dim = 0;
  if (header.size() != 2 || !parse_uint(header[0], n_rows) ||
      !parse_uint(header[1], dim) || dim == 0) {
    throw Error("line 1: expected header \"N D\"");
  }

  EmbeddingSet set;
  set.dim_ = dim;
  set.tokens_.reserve(n_rows);
  set.data_.reserve(n_rows * dim);

  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (is_blank(line)) continue;
    if (set.tokens_.size() == n_rows) {
      throw Error("line " + std::to_string(lineno) + ": more rows than declared (" +
                  std::to_string(n_rows) + ")");
    }
    auto fields = split_whitespace(line);
    if (fields.size() != dim + 1) {
      throw Error("line " + std::to_string(lineno) + ": expected " +
                  std::to_string(dim) + " components, got " +
                  std::to_string(fields.size() - 1));
    }
    std::string token(fields[0]);
    double norm_sq = 0.0;
    for (size_t i = 0; i < dim; ++i) {
      double component = 0.0;
      if (!parse_double(fields[i + 1], component) || !std::isfinite(component)) {
        throw Error("line " + std::to_string(lineno) + ": bad component '" +
                    std::string(fields[i + 1]) + "'");
      }
      set.data_.push_back(component);
      norm_sq += component * component;
    }
    if (norm_sq == 0.0) {
      throw Error("line " + std::to_string(lineno) + ": zero vector for token '" +
                  token + "'");
    }
    auto [it, inserted] = set.index_.emplace(token, set.tokens_.size());
    (void)it;
    if (!inserted) {
      throw Error("line " + std::to_string(lineno) + ": duplicate token '" + token + "'");
    }
    set.tokens_.push_back(std::move(token));
  }

  if (set.tokens_.size() != n_rows) {
    throw Error("expected " + std::to_string(n_rows) + " rows, got " +
                std::to_string(set.tokens_.size()));
  }
  return set;
}

EmbeddingSet EmbeddingSet::build(
    size_t dim, std::span<const std::pair<std::string, std::vector<double>>> rows) {
  if (dim == 0) throw Error("embedding dimension must be positive");
  EmbeddingSet set;
  set.dim_ = dim;
  set.tokens_.reserve(rows.size());
  set.data_.reserve(rows.size() * dim);
  for (const auto& [token, vec] : rows) {
    if (token.empty()) throw Error("embedding: empty token");
    if (vec.size() != dim) throw Error("embedding: row dimension mismatch for '" + token + "'");
    if (squared_norm(vec) == 0.0) throw Error("embedding: zero vector for '" + token + "'");
    auto [it, inserted] = set.index_.emplace(token, set.tokens_.size());
    (void)it;
    if (!inserted) throw Error("embedding: duplicate token '" + token + "'");
    set.tokens_.push_back(token);
    set.data_.insert(set.data_.end(), vec.begin(), vec.end());
  }
  return set;
}

void EmbeddingSet::save(std::ostream& out) const {
  out << tokens_.size() << ' ' << dim_ << '\n';
  for (size_t r = 0; r < tokens_.size(); ++r) {
    out << tokens_[r];
    for (double component : row(r)) out << ' ' << format_double(component);
    out << '\n';
  }
}

bool EmbeddingSet::contains(std::string_view token) const {
  return index_.find(token) != index_.end();
}

std::optional<size_t> EmbeddingSet::row_index(std::string_view token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::span<const double> EmbeddingSet::row(size_t index) const {
  return {data_.data() + index * dim_, dim_};
}

std::span<const double> EmbeddingSet::vector_of(std::string_view token) const {
  auto idx = row_index(token);
  if (!idx) throw Error("embedding: unknown token '" + std::string(token) + "'");
  return row(*idx);
}

EmbeddingSet EmbeddingSet::normalized() const {
  EmbeddingSet out = *this;
  for (size_t r = 0; r < out.tokens_.size(); ++r) {
    double* begin = out.data_.data() + r * dim_;
    double norm = std::sqrt(squared_norm({begin, dim_}));
    for (size_t i = 0; i < dim_; ++i) begin[i] /= norm;
  }
  return out;
}

bool EmbeddingSet::operator==(const EmbeddingSet& other) const {
  return dim_ == other.dim_ && tokens_ == other.tokens_ && data_ == other.data_;
}

double cosine_distance(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw Error("cosine_distance: dimension mismatch");
  double dot = 0.0, norm_u = 0.0, norm_v = 0.0;
  for (size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    norm_u += u[i] * u[i];
    norm_v += v[i] * v[i];
  }
  if (norm_u == 0.0 || norm_v == 0.0) {
    throw DegenerateCombination("cosine distance undefined for zero vector");
  }
  double d = 1.0 - dot / (std::sqrt(norm_u) * std::sqrt(norm_v));
  return std::clamp(d, 0.0, 2.0);
}

EntityVectorView entity_view(const EmbeddingSet& set, const EntityCatalog& catalog,
                             std::optional<EntityType> type_filter) {
  EntityVectorView view;
  view.embeddings = &set;
  view.type_filter = type_filter;
  for (const auto& [id, entry] : catalog.entries()) {
    if (type_filter && entry.type != *type_filter) continue;
    if (set.contains(id)) view.ids.push_back(id);
  }
  if (view.ids.empty()) {
    throw Error(type_filter
                    ? "no candidates of requested type " + std::string(to_string(*type_filter))
                    : std::string("no catalog entities in embedding vocabulary"));
  }
  return view;
}

}  // namespace multiassoc
