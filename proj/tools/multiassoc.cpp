// Command-line front end: builds cooccurrence networks, runs the event
// completion evaluation, inspects neighbors, runs the neighbor-overlap
// study, and generates planted synthetic datasets.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "multiassoc/corpus.hpp"
#include "multiassoc/embedding.hpp"
#include "multiassoc/error.hpp"
#include "multiassoc/eval.hpp"
#include "multiassoc/network.hpp"
#include "multiassoc/ranker.hpp"
#include "multiassoc/synthetic.hpp"
#include "multiassoc/text_io.hpp"

namespace fs = std::filesystem;
using namespace multiassoc;

namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file: " + path);
  return in;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write file: " + path.string());
  return out;
}

struct NamedPath {
  std::string name;
  std::string path;
};

NamedPath parse_named_path(const std::string& arg) {
  size_t eq = arg.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == arg.size()) {
    throw Error("expected NAME=PATH, got '" + arg + "'");
  }
  return {arg.substr(0, eq), arg.substr(eq + 1)};
}

std::optional<uint32_t> parse_max_distance(const std::string& s) {
  if (s == "inf" || s == "unlimited") return std::nullopt;
  uint64_t value = 0;
  if (!parse_uint(s, value) || value > UINT32_MAX) {
    throw Error("bad --max-sentence-distance value '" + s + "' (want integer or 'inf')");
  }
  return static_cast<uint32_t>(value);
}

std::string format_prc(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", value);
  return buf;
}

std::vector<CombinationMode> parse_modes(const std::vector<std::string>& names) {
  std::vector<CombinationMode> modes;
  if (names.empty()) {
    modes.assign(all_combination_modes.begin(), all_combination_modes.end());
    return modes;
  }
  for (const auto& name : names) {
    auto mode = combination_mode_from_string(name);
    if (!mode) throw Error("unknown combination mode '" + name + "'");
    if (std::find(modes.begin(), modes.end(), *mode) == modes.end()) {
      modes.push_back(*mode);
    }
  }
  return modes;
}

struct LoadedEmbedding {
  std::string name;
  EmbeddingSet set;
  // Candidate views; a type can be empty (no such entities in vocabulary),
  // in which case queries of that type fail with "no candidates".
  std::map<std::optional<EntityType>, EntityVectorView> views;
};

std::vector<LoadedEmbedding> load_embeddings(const std::vector<std::string>& args,
                                             bool normalize) {
  std::vector<LoadedEmbedding> out;
  for (const auto& arg : args) {
    NamedPath np = parse_named_path(arg);
    for (const auto& existing : out) {
      if (existing.name == np.name) {
        throw Error("duplicate embedding name '" + np.name + "'");
      }
    }
    auto in = open_input(np.path);
    LoadedEmbedding loaded;
    loaded.name = np.name;
    try {
      loaded.set = EmbeddingSet::load(in);
    } catch (const Error& e) {
      throw Error(np.path + ": " + e.what());
    }
    if (normalize) loaded.set = loaded.set.normalized();
    out.push_back(std::move(loaded));
  }
  return out;
}

void build_views(std::vector<LoadedEmbedding>& embeddings, const EntityCatalog& catalog,
                 bool untyped) {
  // Done in a second pass: views point into the sets, which must not move
  // afterwards.
  for (auto& emb : embeddings) {
    if (untyped) {
      try {
        emb.views[std::nullopt] = entity_view(emb.set, catalog, std::nullopt);
      } catch (const Error&) {
      }
    } else {
      for (EntityType type : all_entity_types) {
        try {
          emb.views[type] = entity_view(emb.set, catalog, type);
        } catch (const Error&) {
          // No entities of this type in the vocabulary.
        }
      }
    }
  }
}

// ---------------------------------------------------------------------- //

struct BuildNetworkOptions {
  std::string corpus_path;
  std::string catalog_path;
  std::string max_distance = "inf";
  int dedupe = 1;
  std::string out_path;
};

int run_build_network(const BuildNetworkOptions& opt) {
  auto catalog_in = open_input(opt.catalog_path);
  EntityCatalog catalog = parse_catalog(catalog_in);
  auto corpus_in = open_input(opt.corpus_path);
  std::vector<Document> corpus = parse_corpus(corpus_in);

  NetworkBuildParams params;
  params.max_sentence_distance = parse_max_distance(opt.max_distance);
  params.dedupe_per_sentence = opt.dedupe != 0;

  CooccurrenceNetwork network = build_network(corpus, catalog, params);
  auto out = open_output(opt.out_path);
  save_network(out, network);

  std::cout << "nodes=" << network.node_count() << " edges=" << network.edge_count()
            << " -> " << opt.out_path << '\n';
  return 0;
}

// ---------------------------------------------------------------------- //

struct EvalOptions {
  std::string corpus_path;
  std::string catalog_path;
  std::string events_path;
  std::vector<std::string> embedding_args;
  std::string network_path;  // empty: build from corpus
  bool no_network = false;
  std::vector<std::string> mode_names;
  size_t k = 10;
  uint64_t seed = 1;
  std::string max_distance = "inf";
  int dedupe = 1;
  std::string out_dir;
  bool untyped = false;
  bool normalize = false;
};

int run_eval(const EvalOptions& opt) {
  auto catalog_in = open_input(opt.catalog_path);
  EntityCatalog catalog = parse_catalog(catalog_in);
  auto corpus_in = open_input(opt.corpus_path);
  std::vector<Document> corpus = parse_corpus(corpus_in);
  auto events_in = open_input(opt.events_path);
  EventsFile events = parse_events(events_in, catalog);

  std::vector<LoadedEmbedding> embeddings =
      load_embeddings(opt.embedding_args, opt.normalize);
  bool use_network = !opt.no_network;
  if (embeddings.empty() && !use_network) {
    throw Error("no rankers configured: give --embedding and/or drop --no-network");
  }

  NetworkBuildParams params;
  params.max_sentence_distance = parse_max_distance(opt.max_distance);
  params.dedupe_per_sentence = opt.dedupe != 0;
  CooccurrenceNetwork network;
  if (use_network) {
    if (!opt.network_path.empty()) {
      auto net_in = open_input(opt.network_path);
      network = load_network(net_in);
    } else {
      network = build_network(corpus, catalog, params);
    }
  }

  std::vector<Query> queries = generate_queries(events.events, catalog);

  std::vector<VocabularyView> models;
  for (const auto& emb : embeddings) {
    models.push_back({emb.name, [set = &emb.set](const std::string& id) {
                        return set->contains(id);
                      }});
  }
  if (use_network) {
    models.push_back({"network", [net = &network](const std::string& id) {
                        return net->has_node(id);
                      }});
  }
  FilterResult filtered = filter_queries(queries, models);

  std::vector<CombinationMode> modes = parse_modes(opt.mode_names);
  build_views(embeddings, catalog, opt.untyped);

  std::vector<EvalRanker> rankers;
  for (const auto& emb : embeddings) {
    for (CombinationMode mode : modes) {
      EvalRanker ranker;
      ranker.method = emb.name;
      ranker.mode = mode;
      ranker.run = [&emb, mode, untyped = opt.untyped](const Query& query) {
        auto view_it = emb.views.find(untyped ? std::optional<EntityType>{}
                                              : std::optional<EntityType>{query.target_type});
        if (view_it == emb.views.end()) {
          RankedResult r;
          r.query = query;
          r.failure = "no candidates";
          return r;
        }
        return rank_embedding(query, mode, view_it->second, emb.set);
      };
      rankers.push_back(std::move(ranker));
    }
  }
  if (use_network) {
    EvalRanker ranker;
    ranker.method = "network";
    ranker.run = [&network, &catalog, untyped = opt.untyped](const Query& query) {
      return rank_network(query, network, catalog, untyped);
    };
    rankers.push_back(std::move(ranker));
  }

  if (filtered.retained.empty()) {
    throw EvalError("all " + std::to_string(filtered.n_input) +
                    " queries were dropped during vocabulary filtering");
  }

  EvalRun run = evaluate(filtered.retained, rankers, opt.k);
  auto frequencies = entity_frequencies(corpus, catalog);
  FrequencyAnalysis freq_analysis =
      frequency_analysis(filtered.retained, run.outcomes, frequencies, opt.seed);

  fs::create_directories(opt.out_dir);
  fs::path dir(opt.out_dir);
  {
    auto out = open_output(dir / "precision_table.csv");
    render_precision_table(out, run.report);
  }
  {
    auto out = open_output(dir / "recall_curves.csv");
    render_recall_curves(out, run.report);
  }
  {
    auto out = open_output(dir / "frequency_analysis.csv");
    render_frequency_analysis(out, freq_analysis);
  }
  {
    auto out = open_output(dir / "drop_report.csv");
    out << "model,target_missing,no_query_entities\n";
    for (const auto& stats : filtered.per_model) {
      out << stats.model << ',' << stats.target_missing << ','
          << stats.no_query_entities << '\n';
    }
  }
  {
    auto out = open_output(dir / "run_summary.txt");
    out << "multiassoc eval\n";
    out << "events: " << events.events.size()
        << " (dropped_small=" << events.n_dropped_small << ")\n";
    out << "queries: generated=" << filtered.n_input
        << " retained=" << filtered.retained.size() << '\n';
    out << "k=" << opt.k << " seed=" << opt.seed
        << " untyped=" << (opt.untyped ? 1 : 0)
        << " normalize=" << (opt.normalize ? 1 : 0) << '\n';
    if (use_network) {
      out << "network: nodes=" << network.node_count()
          << " edges=" << network.edge_count() << " maxdist="
          << (network.params().max_sentence_distance
                  ? std::to_string(*network.params().max_sentence_distance)
                  : std::string("inf"))
          << " dedupe=" << (network.params().dedupe_per_sentence ? 1 : 0) << '\n';
      out << "note: the network ranker scores a candidate by summing its edge "
             "weights to all query entities\n";
    }
    for (const auto& emb : embeddings) {
      out << "embedding " << emb.name << ": tokens=" << emb.set.size()
          << " dim=" << emb.set.dim() << '\n';
    }
    for (size_t c = 0; c < run.report.cells.size(); ++c) {
      const auto& cell = run.report.cells[c];
      size_t misses = 0;
      for (const auto& rank : run.outcomes[c].target_ranks) {
        if (!rank) ++misses;
      }
      out << "cell " << cell.label() << ": prc@1=" << format_prc(cell.precision_at_1)
          << " recall@" << run.report.k_max << '='
          << format_prc(cell.recall_at_k.back()) << " failed=" << cell.n_failed
          << " misses=" << misses << '\n';
    }
    // Embedding files named base.N are treated as retrainings of one
    // method; report their per-mode means as well.
    std::map<std::pair<std::string, std::string>, std::pair<double, size_t>> groups;
    for (const auto& cell : run.report.cells) {
      size_t dot = cell.method.rfind('.');
      if (dot == std::string::npos || dot == 0) continue;
      std::string base = cell.method.substr(0, dot);
      std::string mode = cell.mode ? std::string(to_string(*cell.mode)) : "-";
      auto& [sum, count] = groups[{base, mode}];
      sum += cell.precision_at_1;
      ++count;
    }
    for (const auto& [key, agg] : groups) {
      if (agg.second < 2) continue;
      out << "group " << key.first << "/" << key.second << ": mean_prc@1="
          << format_prc(agg.first / static_cast<double>(agg.second))
          << " over " << agg.second << " files\n";
    }
  }

  std::cout << "evaluated " << filtered.retained.size() << " queries with "
            << rankers.size() << " rankers; reports in " << opt.out_dir << '\n';
  for (const auto& cell : run.report.cells) {
    std::cout << "  " << cell.label() << ": prc@1=" << format_prc(cell.precision_at_1)
              << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------------- //

struct NeighborsOptions {
  std::string network_path;
  std::string embedding_arg;
  std::string catalog_path;
  std::string entity;
  size_t n = 10;
};

int run_neighbors(const NeighborsOptions& opt) {
  if (opt.network_path.empty() == opt.embedding_arg.empty()) {
    throw Error("give exactly one of --network or --embedding");
  }
  if (!opt.network_path.empty()) {
    auto in = open_input(opt.network_path);
    CooccurrenceNetwork network = load_network(in);
    NeighborList list = top_neighbors(network, opt.entity, opt.n);
    for (const auto& [id, weight] : list.neighbors) {
      std::cout << id << '\t' << format_double(weight) << '\n';
    }
    return 0;
  }

  NamedPath np = parse_named_path(opt.embedding_arg);
  auto in = open_input(np.path);
  EmbeddingSet set = EmbeddingSet::load(in);
  auto anchor = set.vector_of(opt.entity);  // throws for unknown entities

  std::vector<std::string> universe;
  if (!opt.catalog_path.empty()) {
    auto catalog_in = open_input(opt.catalog_path);
    EntityCatalog catalog = parse_catalog(catalog_in);
    for (const auto& id : catalog.ids()) {
      if (set.contains(id)) universe.push_back(id);
    }
  } else {
    universe = set.tokens();
    std::sort(universe.begin(), universe.end());
  }

  std::vector<std::pair<double, std::string>> scored;
  for (const auto& id : universe) {
    if (id == opt.entity) continue;
    scored.emplace_back(cosine_distance(anchor, set.vector_of(id)), id);
  }
  std::sort(scored.begin(), scored.end());
  if (scored.size() > opt.n) scored.resize(opt.n);
  for (const auto& [dist, id] : scored) {
    std::cout << id << '\t' << format_double(dist) << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------------- //

struct OverlapOptions {
  std::string catalog_path;
  std::string corpus_path;
  std::string network_path;
  std::vector<std::string> embedding_args;
  std::string max_distance = "inf";
  int dedupe = 1;
  size_t per_type_sample = 25;
  size_t gt_size = 100;
  size_t max_k = 0;
  uint64_t seed = 1;
  bool normalize = false;
  std::string out_dir;
};

int run_overlap(const OverlapOptions& opt) {
  auto catalog_in = open_input(opt.catalog_path);
  EntityCatalog catalog = parse_catalog(catalog_in);

  CooccurrenceNetwork network;
  if (!opt.network_path.empty()) {
    auto in = open_input(opt.network_path);
    network = load_network(in);
  } else if (!opt.corpus_path.empty()) {
    auto in = open_input(opt.corpus_path);
    std::vector<Document> corpus = parse_corpus(in);
    NetworkBuildParams params;
    params.max_sentence_distance = parse_max_distance(opt.max_distance);
    params.dedupe_per_sentence = opt.dedupe != 0;
    network = build_network(corpus, catalog, params);
  } else {
    throw Error("give --network or --corpus to obtain the reference network");
  }

  std::vector<LoadedEmbedding> embeddings =
      load_embeddings(opt.embedding_args, opt.normalize);
  if (embeddings.empty()) throw Error("overlap needs at least one --embedding");

  std::vector<std::pair<std::string, const EmbeddingSet*>> sets;
  for (const auto& emb : embeddings) sets.emplace_back(emb.name, &emb.set);

  OverlapStudy study = overlap_study(network, sets, catalog, opt.per_type_sample,
                                     opt.gt_size, opt.seed, opt.max_k);

  fs::create_directories(opt.out_dir);
  fs::path dir(opt.out_dir);
  {
    auto out = open_output(dir / "overlap_curves.csv");
    render_overlap_curves(out, study);
  }
  {
    auto out = open_output(dir / "overlap_summary.txt");
    out << "multiassoc overlap\n";
    out << "gt_size=" << study.gt_size << " per_type_sample=" << opt.per_type_sample
        << " seed=" << opt.seed << '\n';
    out << "sampled_entities:";
    for (const auto& id : study.sampled_entities) out << ' ' << id;
    out << '\n';
    for (const auto& curve : study.curves) {
      out << "method " << curve.method << ": entities_missing="
          << curve.n_entities_missing;
      if (!curve.mean_recall.empty()) {
        out << " final_mean_recall=" << format_double(curve.mean_recall.back());
      }
      out << '\n';
    }
    for (const auto& warning : study.warnings) out << "warning: " << warning << '\n';
  }

  std::cout << "sampled " << study.sampled_entities.size()
            << " entities; curves in " << opt.out_dir << '\n';
  return 0;
}

// ---------------------------------------------------------------------- //

struct SynthOptions {
  SyntheticParams params;
  std::string out_dir;
};

int run_synth(const SynthOptions& opt) {
  SyntheticDataset data = generate_synthetic(opt.params);

  fs::create_directories(opt.out_dir);
  fs::path dir(opt.out_dir);
  {
    auto out = open_output(dir / "corpus.jsonl");
    write_corpus(out, data.corpus);
  }
  {
    auto out = open_output(dir / "catalog.tsv");
    write_catalog(out, data.catalog);
  }
  {
    auto out = open_output(dir / "events.jsonl");
    write_events(out, data.events);
  }
  {
    auto out = open_output(dir / "embedding.txt");
    data.embedding.save(out);
  }

  std::cout << "wrote " << data.corpus.size() << " docs, " << data.catalog.size()
            << " entities, " << data.events.size() << " events, embedding dim "
            << data.embedding.dim() << " to " << opt.out_dir << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-entity association retrieval: vector combination ranking "
               "against a sentence-distance cooccurrence network"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from an INI/TOML file");

  BuildNetworkOptions bn;
  CLI::App* cmd_bn = app.add_subcommand(
      "build-network", "Build the cooccurrence network from an annotated corpus");
  cmd_bn->add_option("--corpus", bn.corpus_path, "Corpus (JSON lines)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_bn->add_option("--catalog", bn.catalog_path, "Entity catalog (TSV)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_bn->add_option("--max-sentence-distance", bn.max_distance,
                     "Max sentence gap, integer or 'inf'");
  cmd_bn->add_option("--dedupe", bn.dedupe,
                     "Count repeated mentions within a sentence once (0|1)")
      ->check(CLI::Range(0, 1));
  cmd_bn->add_option("--out", bn.out_path, "Output edge-list file")->required();

  EvalOptions ev;
  CLI::App* cmd_ev =
      app.add_subcommand("eval", "Run the event completion evaluation");
  cmd_ev->add_option("--corpus", ev.corpus_path, "Corpus (JSON lines)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_ev->add_option("--catalog", ev.catalog_path, "Entity catalog (TSV)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_ev->add_option("--events", ev.events_path, "Ground-truth events (JSON lines)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_ev->add_option("--embedding", ev.embedding_args,
                     "Embedding as NAME=PATH (repeatable)");
  cmd_ev->add_option("--network", ev.network_path,
                     "Prebuilt network file (default: build from corpus)")
      ->check(CLI::ExistingFile);
  cmd_ev->add_flag("--no-network", ev.no_network, "Skip the network baseline");
  cmd_ev->add_option("--modes", ev.mode_names,
                     "Comma-separated combination modes (default: all six)")
      ->delimiter(',');
  cmd_ev->add_option("--k", ev.k, "Recall cutoff")->check(CLI::PositiveNumber);
  cmd_ev->add_option("--seed", ev.seed, "Seed for bootstrap resampling");
  cmd_ev->add_option("--max-sentence-distance", ev.max_distance,
                     "Max sentence gap, integer or 'inf'");
  cmd_ev->add_option("--dedupe", ev.dedupe,
                     "Count repeated mentions within a sentence once (0|1)")
      ->check(CLI::Range(0, 1));
  cmd_ev->add_option("--out-dir", ev.out_dir, "Report directory")->required();
  cmd_ev->add_flag("--untyped-candidates", ev.untyped,
                   "Rank candidates of every type, not just the target's");
  cmd_ev->add_flag("--normalize-embeddings", ev.normalize,
                   "Scale every vector to unit norm before ranking");

  NeighborsOptions nb;
  CLI::App* cmd_nb = app.add_subcommand(
      "neighbors", "List the closest entities to one entity");
  cmd_nb->add_option("--network", nb.network_path, "Network file source")
      ->check(CLI::ExistingFile);
  cmd_nb->add_option("--embedding", nb.embedding_arg, "Embedding source as NAME=PATH");
  cmd_nb->add_option("--catalog", nb.catalog_path,
                     "Restrict embedding neighbors to catalog entities")
      ->check(CLI::ExistingFile);
  cmd_nb->add_option("--entity", nb.entity, "Entity id")->required();
  cmd_nb->add_option("--n", nb.n, "Number of neighbors");

  OverlapOptions ov;
  CLI::App* cmd_ov = app.add_subcommand(
      "overlap", "Compare embedding neighborhoods against the network's");
  cmd_ov->add_option("--catalog", ov.catalog_path, "Entity catalog (TSV)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_ov->add_option("--corpus", ov.corpus_path, "Corpus to build the network from")
      ->check(CLI::ExistingFile);
  cmd_ov->add_option("--network", ov.network_path, "Prebuilt network file")
      ->check(CLI::ExistingFile);
  cmd_ov->add_option("--embedding", ov.embedding_args,
                     "Embedding as NAME=PATH (repeatable)");
  cmd_ov->add_option("--max-sentence-distance", ov.max_distance,
                     "Max sentence gap, integer or 'inf'");
  cmd_ov->add_option("--dedupe", ov.dedupe,
                     "Count repeated mentions within a sentence once (0|1)")
      ->check(CLI::Range(0, 1));
  cmd_ov->add_option("--per-type-sample", ov.per_type_sample,
                     "Entities sampled per type")
      ->check(CLI::PositiveNumber);
  cmd_ov->add_option("--gt-size", ov.gt_size, "Pseudo ground-truth size")
      ->check(CLI::PositiveNumber);
  cmd_ov->add_option("--max-k", ov.max_k, "Curve cutoff (0 = full ranking)");
  cmd_ov->add_option("--seed", ov.seed, "Sampling seed");
  cmd_ov->add_flag("--normalize-embeddings", ov.normalize,
                   "Scale every vector to unit norm before ranking");
  cmd_ov->add_option("--out-dir", ov.out_dir, "Report directory")->required();

  SynthOptions sy;
  CLI::App* cmd_sy = app.add_subcommand(
      "synth", "Generate a deterministic planted dataset");
  cmd_sy->add_option("--seed", sy.params.seed, "Generator seed");
  cmd_sy->add_option("--entities", sy.params.n_entities, "Total entities");
  cmd_sy->add_option("--events", sy.params.n_events, "Number of events");
  cmd_sy->add_option("--entities-per-event", sy.params.entities_per_event,
                     "Participants per event");
  cmd_sy->add_option("--docs", sy.params.n_docs, "Number of documents");
  cmd_sy->add_option("--noise-rate", sy.params.noise_rate,
                     "Chance of an unrelated mention per noise slot");
  cmd_sy->add_option("--dim", sy.params.dim, "Planted embedding dimension");
  cmd_sy->add_option("--sentences-per-doc", sy.params.sentences_per_doc,
                     "Sentences per document");
  cmd_sy->add_option("--out-dir", sy.out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (cmd_bn->parsed()) return run_build_network(bn);
    if (cmd_ev->parsed()) return run_eval(ev);
    if (cmd_nb->parsed()) return run_neighbors(nb);
    if (cmd_ov->parsed()) return run_overlap(ov);
    if (cmd_sy->parsed()) return run_synth(sy);
  } catch (const EvalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
