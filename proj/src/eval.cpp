#include "multiassoc/eval.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <set>
#include <unordered_set>

#include "multiassoc/parallel.hpp"
#include "multiassoc/rng.hpp"
#include "multiassoc/text_io.hpp"

namespace multiassoc {

namespace {

std::string cell_label(const std::string& method,
                       const std::optional<CombinationMode>& mode) {
  return mode ? method + "/" + std::string(to_string(*mode)) : method;
}

std::string format_prc(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", value);
  return buf;
}

}  // namespace

std::string EvalRanker::label() const { return cell_label(method, mode); }
std::string MetricCell::label() const { return cell_label(method, mode); }
std::string RankerOutcome::label() const { return cell_label(method, mode); }

std::optional<size_t> rank_of_target(const RankedResult& result) {
  if (result.failed()) return std::nullopt;
  for (size_t i = 0; i < result.ranking.size(); ++i) {
    if (result.ranking[i].first == result.query.target) return i + 1;
  }
  return std::nullopt;
}

EvalRun evaluate(std::span<const Query> queries, std::span<const EvalRanker> rankers,
                 size_t k_max) {
  if (queries.empty()) throw EvalError("no queries to evaluate");
  if (rankers.empty()) throw Error("no rankers configured");
  if (k_max == 0) throw Error("k must be positive");

  EvalRun run;
  run.report.k_max = k_max;

  for (const auto& ranker : rankers) {
    std::vector<std::optional<size_t>> ranks(queries.size());
    std::vector<char> failed(queries.size(), 0);
    parallel_for(queries.size(), [&](size_t i) {
      RankedResult result = ranker.run(queries[i]);
      failed[i] = result.failed() ? 1 : 0;
      ranks[i] = rank_of_target(result);
    });

    MetricCell cell;
    cell.method = ranker.method;
    cell.mode = ranker.mode;
    cell.n_queries = queries.size();
    cell.recall_at_k.assign(k_max, 0.0);

    size_t hits_at_1 = 0;
    for (size_t k = 1; k <= k_max; ++k) {
      size_t hits = 0;
      for (const auto& rank : ranks) {
        if (rank && *rank <= k) ++hits;
      }
      cell.recall_at_k[k - 1] =
          static_cast<double>(hits) / static_cast<double>(queries.size());
      if (k == 1) hits_at_1 = hits;
    }
    cell.precision_at_1 =
        static_cast<double>(hits_at_1) / static_cast<double>(queries.size());
    cell.n_failed = static_cast<size_t>(std::count(failed.begin(), failed.end(), 1));

    RankerOutcome outcome;
    outcome.method = ranker.method;
    outcome.mode = ranker.mode;
    outcome.target_ranks = std::move(ranks);
    outcome.n_failed = cell.n_failed;

    run.report.cells.push_back(std::move(cell));
    run.outcomes.push_back(std::move(outcome));
  }
  return run;
}

namespace {

std::pair<uint64_t, uint64_t> frequency_bucket(uint64_t frequency) {
  if (frequency == 0) return {0, 1};
  int width = std::bit_width(frequency);
  uint64_t lo = uint64_t{1} << (width - 1);
  return {lo, lo << 1};
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.size() == 1) return sorted.front();
  double pos = q * static_cast<double>(sorted.size() - 1);
  size_t lo = static_cast<size_t>(pos);
  size_t hi = std::min(lo + 1, sorted.size() - 1);
  double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

std::pair<double, double> bootstrap_mean_ci(std::span<const double> values,
                                            size_t resamples, uint64_t seed) {
  if (values.empty()) throw Error("bootstrap_mean_ci: empty sample");
  Rng rng(seed);
  std::vector<double> means(resamples);
  for (size_t r = 0; r < resamples; ++r) {
    double total = 0.0;
    for (size_t i = 0; i < values.size(); ++i) {
      total += values[rng.bounded(values.size())];
    }
    means[r] = total / static_cast<double>(values.size());
  }
  std::sort(means.begin(), means.end());
  return {quantile_sorted(means, 0.025), quantile_sorted(means, 0.975)};
}

FrequencyAnalysis frequency_analysis(std::span<const Query> queries,
                                     std::span<const RankerOutcome> outcomes,
                                     const std::map<std::string, uint64_t>& frequencies,
                                     uint64_t seed, size_t resamples) {
  if (resamples == 0) throw Error("frequency_analysis: resamples must be positive");

  FrequencyAnalysis analysis;
  for (size_t m = 0; m < outcomes.size(); ++m) {
    const auto& outcome = outcomes[m];
    if (outcome.target_ranks.size() != queries.size()) {
      throw Error("frequency_analysis: outcome size does not match query count");
    }

    struct Bucket {
      uint64_t hi = 0;
      std::vector<double> ranks;
      size_t missed = 0;
    };
    std::map<uint64_t, Bucket> buckets;
    for (size_t i = 0; i < queries.size(); ++i) {
      auto freq_it = frequencies.find(queries[i].target);
      uint64_t freq = freq_it == frequencies.end() ? 0 : freq_it->second;
      auto [lo, hi] = frequency_bucket(freq);
      Bucket& bucket = buckets[lo];
      bucket.hi = hi;
      if (outcome.target_ranks[i]) {
        bucket.ranks.push_back(static_cast<double>(*outcome.target_ranks[i]));
      } else {
        ++bucket.missed;
      }
    }

    std::vector<FrequencyBucketPoint> points;
    for (const auto& [lo, bucket] : buckets) {
      if (bucket.ranks.empty()) continue;  // all misses; visible in the summary
      FrequencyBucketPoint point;
      point.bucket_lo = lo;
      point.bucket_hi = bucket.hi;
      point.n = bucket.ranks.size();
      point.n_missed = bucket.missed;
      double total = 0.0;
      for (double r : bucket.ranks) total += r;
      point.mean_rank = total / static_cast<double>(bucket.ranks.size());
      // Sub-seed split per (method, bucket); order of evaluation is
      // irrelevant to the output.
      uint64_t sub_seed = splitmix64(splitmix64(seed ^ (0x51ed2701ULL + m)) ^ lo);
      auto [ci_low, ci_high] = bootstrap_mean_ci(bucket.ranks, resamples, sub_seed);
      point.ci_low = std::min(ci_low, point.mean_rank);
      point.ci_high = std::max(ci_high, point.mean_rank);
      points.push_back(point);
    }
    analysis.per_method.emplace_back(outcome.label(), std::move(points));
  }
  return analysis;
}

OverlapStudy overlap_study(
    const CooccurrenceNetwork& network,
    std::span<const std::pair<std::string, const EmbeddingSet*>> embeddings,
    const EntityCatalog& catalog, size_t per_type_sample, size_t gt_size,
    uint64_t seed, size_t max_k) {
  if (per_type_sample == 0) throw Error("overlap_study: per_type_sample must be positive");
  if (gt_size == 0) throw Error("overlap_study: gt_size must be positive");

  OverlapStudy study;
  study.gt_size = gt_size;

  Rng rng(seed);
  for (EntityType type : all_entity_types) {
    std::vector<std::string> pool;
    for (const auto& id : catalog.ids(type)) {
      if (network.has_node(id)) pool.push_back(id);
    }
    if (pool.empty()) {
      study.warnings.push_back("no entities of type " + std::string(to_string(type)) +
                               " in network");
      continue;
    }
    if (pool.size() <= per_type_sample) {
      if (pool.size() < per_type_sample) {
        study.warnings.push_back("only " + std::to_string(pool.size()) +
                                 " entities of type " + std::string(to_string(type)) +
                                 " available (wanted " +
                                 std::to_string(per_type_sample) + ")");
      }
      study.sampled_entities.insert(study.sampled_entities.end(), pool.begin(),
                                    pool.end());
    } else {
      for (size_t idx : rng.sample_indices(pool.size(), per_type_sample)) {
        study.sampled_entities.push_back(pool[idx]);
      }
    }
  }
  if (study.sampled_entities.empty()) {
    throw Error("overlap_study: no catalog entities present in the network");
  }

  // Pseudo ground truth per sampled entity: its heaviest network neighbors.
  std::vector<std::set<std::string>> ground_truth;
  ground_truth.reserve(study.sampled_entities.size());
  for (const auto& id : study.sampled_entities) {
    std::set<std::string> gt;
    for (const auto& [nbr, w] : top_neighbors(network, id, gt_size).neighbors) {
      (void)w;
      gt.insert(nbr);
    }
    ground_truth.push_back(std::move(gt));
  }

  for (const auto& [name, set] : embeddings) {
    // Untyped candidate universe: every catalog entity this embedding knows.
    std::vector<std::string> universe;
    for (const auto& id : catalog.ids()) {
      if (set->contains(id)) universe.push_back(id);
    }

    OverlapStudy::MethodCurve curve;
    curve.method = name;

    std::vector<std::vector<double>> recall_curves(study.sampled_entities.size());
    parallel_for(study.sampled_entities.size(), [&](size_t s) {
      const std::string& entity = study.sampled_entities[s];
      if (!set->contains(entity)) return;  // zero curve, never imputed
      auto anchor = set->vector_of(entity);

      std::vector<std::pair<double, const std::string*>> scored;
      scored.reserve(universe.size());
      for (const auto& id : universe) {
        if (id == entity) continue;
        scored.emplace_back(cosine_distance(anchor, set->vector_of(id)), &id);
      }
      std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return *a.second < *b.second;
      });

      const auto& gt = ground_truth[s];
      double denom = static_cast<double>(gt.size());
      std::vector<double>& recalls = recall_curves[s];
      recalls.reserve(scored.size());
      size_t hits = 0;
      for (const auto& [dist, id] : scored) {
        (void)dist;
        if (gt.contains(*id)) ++hits;
        recalls.push_back(denom == 0.0 ? 0.0 : static_cast<double>(hits) / denom);
      }
    });

    size_t k_limit = 0;
    for (size_t s = 0; s < recall_curves.size(); ++s) {
      if (recall_curves[s].empty() && !set->contains(study.sampled_entities[s])) {
        ++curve.n_entities_missing;
      }
      k_limit = std::max(k_limit, recall_curves[s].size());
    }
    if (max_k > 0) k_limit = std::min(k_limit, max_k);

    curve.mean_recall.assign(k_limit, 0.0);
    for (const auto& recalls : recall_curves) {
      for (size_t k = 0; k < k_limit; ++k) {
        // Beyond a ranking's length the recall stays at its final value.
        double r = recalls.empty() ? 0.0 : recalls[std::min(k, recalls.size() - 1)];
        curve.mean_recall[k] += r;
      }
    }
    double inv = 1.0 / static_cast<double>(study.sampled_entities.size());
    for (double& r : curve.mean_recall) r *= inv;

    study.curves.push_back(std::move(curve));
  }
  return study;
}

void render_precision_table(std::ostream& out, const EvalReport& report) {
  // Columns are methods in first-appearance order; rows are modes. Cells
  // without a configured (method, mode) pair stay empty. Mode-less methods
  // (the network) get a final "-" row.
  std::vector<std::string> methods;
  for (const auto& cell : report.cells) {
    if (std::find(methods.begin(), methods.end(), cell.method) == methods.end()) {
      methods.push_back(cell.method);
    }
  }
  std::vector<std::optional<CombinationMode>> rows;
  for (CombinationMode mode : all_combination_modes) {
    for (const auto& cell : report.cells) {
      if (cell.mode == mode) {
        rows.emplace_back(mode);
        break;
      }
    }
  }
  for (const auto& cell : report.cells) {
    if (!cell.mode) {
      rows.emplace_back(std::nullopt);
      break;
    }
  }

  out << "mode";
  for (const auto& method : methods) out << ',' << method;
  out << '\n';
  for (const auto& row : rows) {
    out << (row ? to_string(*row) : "-");
    for (const auto& method : methods) {
      out << ',';
      for (const auto& cell : report.cells) {
        if (cell.method == method && cell.mode == row) {
          out << format_prc(cell.precision_at_1);
          break;
        }
      }
    }
    out << '\n';
  }
}

void render_recall_curves(std::ostream& out, const EvalReport& report) {
  out << "k,method,mode,value\n";
  for (const auto& cell : report.cells) {
    for (size_t k = 1; k <= cell.recall_at_k.size(); ++k) {
      out << k << ',' << cell.method << ',' << (cell.mode ? to_string(*cell.mode) : "-")
          << ',' << format_double(cell.recall_at_k[k - 1]) << '\n';
    }
  }
}

void render_frequency_analysis(std::ostream& out, const FrequencyAnalysis& analysis) {
  out << "bucket_lo,bucket_hi,method,mean_rank,ci_lo,ci_hi,n\n";
  for (const auto& [method, points] : analysis.per_method) {
    for (const auto& point : points) {
      out << point.bucket_lo << ',' << point.bucket_hi << ',' << method << ','
          << format_double(point.mean_rank) << ',' << format_double(point.ci_low)
          << ',' << format_double(point.ci_high) << ',' << point.n << '\n';
    }
  }
}

void render_overlap_curves(std::ostream& out, const OverlapStudy& study) {
  out << "k,method,mean_recall\n";
  for (const auto& curve : study.curves) {
    for (size_t k = 1; k <= curve.mean_recall.size(); ++k) {
      out << k << ',' << curve.method << ',' << format_double(curve.mean_recall[k - 1])
          << '\n';
    }
  }
}

}  // namespace multiassoc
