#pragma once

#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "multiassoc/embedding.hpp"
#include "multiassoc/network.hpp"
#include "multiassoc/ranker.hpp"
#include "multiassoc/types.hpp"

namespace multiassoc {

/// One configured ranking method: an embedding with a combination mode, or
/// the network baseline (no mode).
struct EvalRanker {
  std::string method;
  std::optional<CombinationMode> mode;
  std::function<RankedResult(const Query&)> run;

  std::string label() const;
};

struct MetricCell {
  std::string method;
  std::optional<CombinationMode> mode;
  double precision_at_1 = 0.0;
  /// recall_at_k[k-1] is recall@k, k = 1..k_max. Non-decreasing.
  std::vector<double> recall_at_k;
  size_t n_queries = 0;
  size_t n_failed = 0;

  std::string label() const;
};

struct EvalReport {
  size_t k_max = 0;
  std::vector<MetricCell> cells;
};

/// Per-query outcomes for one ranker, kept for the frequency analysis.
struct RankerOutcome {
  std::string method;
  std::optional<CombinationMode> mode;
  /// 1-based rank of the target per query; nullopt is a miss.
  std::vector<std::optional<size_t>> target_ranks;
  size_t n_failed = 0;

  std::string label() const;
};

struct EvalRun {
  EvalReport report;
  std::vector<RankerOutcome> outcomes;
};

/// 1-based position of the target in the ranking; nullopt when the query
/// failed or the target is not among the candidates.
std::optional<size_t> rank_of_target(const RankedResult& result);

/// Runs every ranker over every query. precision@1 counts rank-1 hits;
/// recall@k counts targets within the top k. Misses count against every k.
/// Queries are evaluated in parallel; results are schedule-independent.
EvalRun evaluate(std::span<const Query> queries, std::span<const EvalRanker> rankers,
                 size_t k_max);

/// Percentile bootstrap (0.95) of the sample mean: `resamples` rounds, each
/// averaging values.size() draws made with Rng(seed).bounded(n); interval
/// ends are the linearly interpolated 2.5% and 97.5% quantiles of the
/// resampled means. Deterministic in (values, resamples, seed).
std::pair<double, double> bootstrap_mean_ci(std::span<const double> values,
                                            size_t resamples, uint64_t seed);

struct FrequencyBucketPoint {
  uint64_t bucket_lo = 0;  // inclusive
  uint64_t bucket_hi = 0;  // exclusive
  double mean_rank = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  size_t n = 0;         // ranks that went into the mean
  size_t n_missed = 0;  // misses in this bucket, excluded from the mean
};

struct FrequencyAnalysis {
  std::vector<std::pair<std::string, std::vector<FrequencyBucketPoint>>> per_method;
};

/// Buckets target ranks by the target's corpus frequency into power-of-two
/// ranges [2^i, 2^(i+1)) (frequency 0 falls into [0, 1)). Misses are
/// excluded from bucket means but reported. The 0.95 confidence interval is
/// a bootstrap percentile over `resamples` seeded resamples; the generator
/// is split per (method, bucket), so the output is independent of execution
/// order.
FrequencyAnalysis frequency_analysis(std::span<const Query> queries,
                                     std::span<const RankerOutcome> outcomes,
                                     const std::map<std::string, uint64_t>& frequencies,
                                     uint64_t seed, size_t resamples = 1000);

struct OverlapStudy {
  size_t gt_size = 0;
  std::vector<std::string> sampled_entities;
  struct MethodCurve {
    std::string method;
    /// mean_recall[k-1] is the mean recall@k over the sampled entities.
    std::vector<double> mean_recall;
    /// Sampled entities absent from this embedding's vocabulary; they
    /// contribute zero recall rather than being imputed.
    size_t n_entities_missing = 0;
  };
  std::vector<MethodCurve> curves;
  std::vector<std::string> warnings;
};

/// Samples per_type_sample entities of each type from the network (seeded),
/// takes each one's gt_size heaviest network neighbors as pseudo ground
/// truth, and measures how quickly each embedding's untyped nearest-neighbor
/// ranking recovers that set. max_k = 0 means the full ranking length.
OverlapStudy overlap_study(const CooccurrenceNetwork& network,
                           std::span<const std::pair<std::string, const EmbeddingSet*>> embeddings,
                           const EntityCatalog& catalog, size_t per_type_sample,
                           size_t gt_size, uint64_t seed, size_t max_k = 0);

/// Report files. All writers are deterministic: identical inputs produce
/// identical bytes.
void render_precision_table(std::ostream& out, const EvalReport& report);
void render_recall_curves(std::ostream& out, const EvalReport& report);
void render_frequency_analysis(std::ostream& out, const FrequencyAnalysis& analysis);
void render_overlap_curves(std::ostream& out, const OverlapStudy& study);

}  // namespace multiassoc
