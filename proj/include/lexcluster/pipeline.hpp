#pragma once

// Subcommands of the command-line pipeline. Each one reads its inputs, writes
// its artifacts under <output_dir>/<subcommand>/ and finishes with a
// manifest.json recording parameters, seeds and content hashes.

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "lexcluster/citegraph.hpp"
#include "lexcluster/community.hpp"
#include "lexcluster/config.hpp"
#include "lexcluster/corpus.hpp"
#include "lexcluster/csv.hpp"
#include "lexcluster/embed.hpp"
#include "lexcluster/evaluate.hpp"
#include "lexcluster/textprep.hpp"
#include "lexcluster/topics.hpp"
#include "lexcluster/util.hpp"

#ifndef LEXCLUSTER_VERSION
#define LEXCLUSTER_VERSION "0.0.0"
#endif

namespace lexcluster {

inline constexpr const char* kVersion = LEXCLUSTER_VERSION;

inline std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

// Collects inputs and outputs of one subcommand and writes them out together.
class ArtifactSet {
 public:
  ArtifactSet(std::filesystem::path dir, std::string subcommand)
      : dir_(std::move(dir)), subcommand_(std::move(subcommand)) {}

  void input(const std::string& name, std::string_view contents) {
    inputs_.push_back({{"name", name},
                       {"fnv1a64", hex64(fnv1a64(contents))},
                       {"bytes", contents.size()}});
  }

  void output(const std::string& file, std::string contents) {
    outputs_[file] = std::move(contents);
  }

  nlohmann::json& parameters() { return parameters_; }
  nlohmann::json& seeds() { return seeds_; }
  nlohmann::json& metrics() { return metrics_; }

  std::filesystem::path commit() const {
    nlohmann::json outputs = nlohmann::json::array();
    for (const auto& [file, contents] : outputs_) {
      write_file_atomic(dir_ / file, contents);
      outputs.push_back({{"file", file},
                         {"fnv1a64", hex64(fnv1a64(contents))},
                         {"bytes", contents.size()}});
    }
    nlohmann::json manifest{{"subcommand", subcommand_},
                            {"version", kVersion},
                            {"parameters", parameters_},
                            {"seeds", seeds_},
                            {"inputs", inputs_},
                            {"outputs", outputs}};
    if (!metrics_.is_null()) manifest["metrics"] = metrics_;
    write_file_atomic(dir_ / "manifest.json", dump_json(manifest));
    return dir_;
  }

 private:
  std::filesystem::path dir_;
  std::string subcommand_;
  nlohmann::json inputs_ = nlohmann::json::array();
  nlohmann::json parameters_ = nlohmann::json::object();
  nlohmann::json seeds_ = nlohmann::json::object();
  nlohmann::json metrics_;
  std::map<std::string, std::string> outputs_;
};

// Problems found when re-hashing the outputs listed in a manifest.
inline std::vector<std::string> verify_manifest(const std::filesystem::path& dir) {
  std::vector<std::string> problems;
  const auto path = dir / "manifest.json";
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(read_file(path));
  } catch (const std::exception& e) {
    return {path.string() + ": " + e.what()};
  }
  for (const auto& out : manifest.value("outputs", nlohmann::json::array())) {
    const auto file = dir / out.at("file").get<std::string>();
    if (!std::filesystem::exists(file)) {
      problems.push_back(file.string() + ": missing");
      continue;
    }
    if (hex64(fnv1a64(read_file(file))) != out.at("fnv1a64").get<std::string>()) {
      problems.push_back(file.string() + ": hash mismatch");
    }
  }
  return problems;
}

inline std::string gamma_tag(double resolution) { return format_double(resolution); }

inline std::string partition_file(double resolution) {
  return "partition_gamma_" + gamma_tag(resolution) + ".csv";
}

// Per-document topic vectors as written by lda-train.
struct ThetaTable {
  std::vector<std::string> ids;
  std::vector<std::size_t> primary;
  Matrix<double> theta;

  std::size_t num_topics() const { return theta.cols(); }

  ThetaMap as_map() const {
    ThetaMap out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const auto row = theta.row(i);
      out.emplace(ids[i], std::vector<double>(row.begin(), row.end()));
    }
    return out;
  }
};

inline std::string export_theta_csv(const TopicModel& model) {
  std::vector<std::string> header{"case_id", "primary_topic"};
  for (std::size_t k = 0; k < model.num_topics; ++k) header.push_back("topic_" + std::to_string(k));
  std::string out = csv::join(header) + "\n";
  for (std::size_t d = 0; d < model.num_docs(); ++d) {
    const auto row = model.theta_row(d);
    std::vector<std::string> fields{model.doc_keys[d], std::to_string(primary_topic(row))};
    for (double v : row) fields.push_back(format_double(v));
    out += csv::join(fields) + "\n";
  }
  return out;
}

inline ThetaTable import_theta_csv(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw ValidationError("theta CSV is empty");
  const auto header = csv::parse_line(lines[0]);
  if (header.size() < 3 || header[0] != "case_id" || header[1] != "primary_topic") {
    throw ValidationError("theta CSV must start with 'case_id,primary_topic,topic_0,...'");
  }
  const std::size_t K = header.size() - 2;
  ThetaTable t;
  std::vector<double> values;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const auto f = csv::parse_line(lines[i]);
    if (f.size() != K + 2) {
      throw ValidationError("theta CSV line " + std::to_string(i + 1) + ": expected " +
                            std::to_string(K + 2) + " fields");
    }
    t.ids.push_back(f[0]);
    t.primary.push_back(std::stoul(f[1]));
    for (std::size_t k = 0; k < K; ++k) values.push_back(std::stod(f[k + 2]));
  }
  t.theta = Matrix<double>(t.ids.size(), K);
  std::copy(values.begin(), values.end(), t.theta.data().begin());
  return t;
}

inline std::string export_vocabulary_csv(const Vocabulary& vocab) {
  std::string out = "word,doc_frequency\n";
  for (WordId w = 0; w < vocab.size(); ++w) {
    out += csv::join({vocab.word(w), std::to_string(vocab.doc_frequency(w))}) + "\n";
  }
  return out;
}

inline Vocabulary import_vocabulary_csv(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty() || trim(lines[0]) != "word,doc_frequency") {
    throw ValidationError("vocabulary CSV must start with header 'word,doc_frequency'");
  }
  std::vector<std::string> words;
  std::vector<std::size_t> df;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = csv::parse_line(lines[i]);
    if (f.size() != 2) throw ValidationError("vocabulary CSV line " + std::to_string(i + 1));
    words.push_back(f[0]);
    df.push_back(std::stoul(f[1]));
  }
  return Vocabulary(std::move(words), std::move(df));
}

struct BowTable {
  std::vector<std::string> ids;
  std::vector<BowVector> bows;
};

inline std::string export_bow_jsonl(const BowTable& t) {
  std::string out;
  for (std::size_t d = 0; d < t.ids.size(); ++d) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : t.bows[d]) entries.push_back({e.word, e.count});
    out += nlohmann::json{{"case_id", t.ids[d]},
                          {"length", bow_length(t.bows[d])},
                          {"bow", entries}}
               .dump();
    out += '\n';
  }
  return out;
}

inline BowTable import_bow_jsonl(std::string_view text) {
  BowTable t;
  std::size_t line_no = 0;
  for (const auto& line : split_lines(text)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      t.ids.push_back(j.at("case_id").get<std::string>());
      BowVector bow;
      for (const auto& e : j.at("bow")) {
        bow.push_back({e.at(0).get<WordId>(), e.at(1).get<std::uint32_t>()});
      }
      t.bows.push_back(std::move(bow));
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("bag-of-words line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return t;
}

class Pipeline {
 public:
  explicit Pipeline(RunConfig config) : cfg_(std::move(config)) {}

  const RunConfig& config() const { return cfg_; }
  std::filesystem::path dir(const std::string& subcommand) const {
    return cfg_.output_dir() / subcommand;
  }

  std::filesystem::path ingest() {
    ArtifactSet out(dir("ingest"), "ingest");
    const auto corpus = load_source_corpus(out);
    const auto labels = load_labels(out);
    std::size_t labelled_present = 0;
    for (const auto& id : labels.case_ids) labelled_present += corpus.find(id) != nullptr;
    const auto census = corpus_census(corpus);
    out.output("census.json",
               dump_json({{"documents", to_json(census)},
                          {"annotations",
                           {{"label", labels.label_name},
                            {"size", labels.size()},
                            {"in_corpus", labelled_present}}}}));
    out.parameters() = {{"label", cfg_.evaluate.label}};
    log_info("ingest: " + std::to_string(census.total()) + " documents (en judgment " +
             std::to_string(census.en_judgment) + ", en decision " +
             std::to_string(census.en_decision) + ", fr decision " +
             std::to_string(census.fr_decision) + ", fr judgment " +
             std::to_string(census.fr_judgment) + "); " + std::to_string(labels.size()) +
             " labelled '" + labels.label_name + "'");
    return out.commit();
  }

  std::filesystem::path preprocess() {
    ArtifactSet out(dir("preprocess"), "preprocess");
    const auto corpus = load_source_corpus(out);
    const auto english = filter_corpus(corpus, Language::en, std::nullopt);
    const auto norm = normalize_config(out);
    std::vector<std::string_view> texts;
    BowTable table;
    for (const auto& doc : english) {
      table.ids.push_back(doc.case_id);
      texts.push_back(doc.text);
    }
    const auto tokens = normalize_all(texts, norm);
    const auto vocab =
        build_vocabulary(tokens, cfg_.textprep.min_df, cfg_.textprep.max_df_ratio);
    std::size_t empty = 0;
    for (const auto& t : tokens) {
      table.bows.push_back(to_bow(t, vocab));
      empty += table.bows.back().empty();
    }
    if (empty) log_warning("preprocess: " + std::to_string(empty) + " document(s) have no vocabulary words");
    out.output("vocabulary.csv", export_vocabulary_csv(vocab));
    out.output("bow.jsonl", export_bow_jsonl(table));
    out.parameters() = to_json(cfg_.textprep);
    out.metrics() = {{"documents", table.ids.size()}, {"vocabulary", vocab.size()}, {"empty_documents", empty}};
    log_info("preprocess: " + std::to_string(table.ids.size()) + " English documents, " +
             std::to_string(vocab.size()) + " vocabulary words");
    return out.commit();
  }

  std::filesystem::path lda_train() {
    ArtifactSet out(dir("lda-train"), "lda-train");
    const auto bows = load_bows(out);
    const auto vocab = load_vocabulary(out);
    const auto params = lda_params(cfg_.lda.topics, cfg_.lda.seed);
    const auto model = train_lda(bows.bows, params, bows.ids, vocab.size());
    const auto coherence = umass_coherence(model, bows.bows, cfg_.lda.coherence_top_n);
    out.output("model.json", dump_json(model_to_json(model, vocab)));
    out.output("theta.csv", export_theta_csv(model));
    out.output("topics.json", dump_json({{"K", model.num_topics},
                                         {"topics", topic_report(model, vocab, cfg_.lda.top_words)},
                                         {"coherence", coherence},
                                         {"log_likelihood", model.log_likelihood_trace}}));
    out.parameters() = to_json(cfg_.lda);
    out.seeds() = {{"lda", cfg_.lda.seed}};
    log_info("lda-train: K=" + std::to_string(model.num_topics) + " over " +
             std::to_string(model.num_docs()) + " documents");
    return out.commit();
  }

  std::filesystem::path lda_sweep() {
    ArtifactSet out(dir("lda-sweep"), "lda-sweep");
    const auto bows = load_bows(out);
    const auto vocab = load_vocabulary(out);
    const auto base = lda_params(cfg_.lda.sweep_min, cfg_.lda.seed);
    const auto table = coherence_sweep(bows.bows, cfg_.lda.sweep_min, cfg_.lda.sweep_max, base,
                                       cfg_.lda.coherence_top_n, bows.ids, vocab.size());
    std::string csv_out = "K,mean_coherence\n";
    nlohmann::json seeds = nlohmann::json::object();
    std::size_t best = table.front().num_topics;
    double best_mean = table.front().mean;
    for (const auto& row : table) {
      csv_out += std::to_string(row.num_topics) + "," + format_double(row.mean) + "\n";
      seeds[std::to_string(row.num_topics)] = cfg_.lda.seed + row.num_topics;
      if (row.mean > best_mean) {
        best_mean = row.mean;
        best = row.num_topics;
      }
    }
    out.output("coherence.json", dump_json({{"rows", to_json(table)}, {"best_K", best}}));
    out.output("coherence.csv", csv_out);
    out.parameters() = to_json(cfg_.lda);
    out.seeds() = seeds;
    log_info("lda-sweep: K=" + std::to_string(cfg_.lda.sweep_min) + ".." +
             std::to_string(cfg_.lda.sweep_max) + ", highest mean coherence at K=" +
             std::to_string(best));
    return out.commit();
  }

  std::filesystem::path embed() {
    ArtifactSet out(dir("embed"), "embed");
    const auto theta = load_theta(out);
    const auto labels = load_labels(out);
    TsneParams params;
    params.perplexity = cfg_.tsne.perplexity;
    params.iterations = cfg_.tsne.iterations;
    params.learning_rate = cfg_.tsne.learning_rate;
    params.seed = cfg_.tsne.seed;
    const auto e = tsne(theta.ids, theta.theta, params);
    std::string csv_out = "case_id,x,y,primary_topic,label_flags\n";
    for (std::size_t i = 0; i < e.ids.size(); ++i) {
      csv_out += csv::join({e.ids[i], format_double(e.coords[i][0]), format_double(e.coords[i][1]),
                            std::to_string(theta.primary[i]),
                            labels.contains(e.ids[i]) ? labels.label_name : ""}) +
                 "\n";
    }
    out.output("embedding.csv", csv_out);
    out.parameters() = to_json(cfg_.tsne);
    out.seeds() = {{"tsne", cfg_.tsne.seed}};
    out.metrics() = {{"kl_divergence", e.kl_divergence}};
    log_info("embed: " + std::to_string(e.ids.size()) + " points, KL " +
             format_fixed(e.kl_divergence, 4));
    return out.commit();
  }

  std::filesystem::path graph_build() {
    ArtifactSet out(dir("graph-build"), "graph-build");
    const auto corpus = load_source_corpus(out);
    const auto policy =
        cfg_.graph.dangling == "stub" ? DanglingPolicy::stub : DanglingPolicy::drop;
    const auto built = build_graph(corpus, policy, cfg_.graph.accumulate);
    const auto& g = built.graph;
    const auto census = components(g);
    if (!census.giant || census.sizes[*census.giant] < 2) {
      throw ValidationError("graph-build: the citation graph has no edges");
    }
    const auto giant = subgraph(g, census, *census.giant);
    auto summary = to_json(census, g);
    summary["build"] = {{"dropped_citations", built.summary.dropped_citations},
                        {"stub_nodes", built.summary.stub_nodes},
                        {"self_loops", built.summary.self_loops},
                        {"duplicates_collapsed", built.summary.duplicates_collapsed}};
    std::string comp = "case_id,component\n";
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      comp += csv::join({g.node(v).case_id, std::to_string(census.component_of[v])}) + "\n";
    }
    out.output("census.json", dump_json(summary));
    out.output("nodes.csv", export_nodes_csv(g));
    out.output("edges.csv", export_edges_csv(g));
    out.output("components.csv", comp);
    out.output("giant_nodes.csv", export_nodes_csv(giant));
    out.output("giant_edges.csv", export_edges_csv(giant));
    out.parameters() = to_json(cfg_.graph);
    log_info("graph-build: " + std::to_string(g.num_nodes()) + " nodes, " +
             std::to_string(g.num_edges()) + " edges, " + std::to_string(census.count()) +
             " components, giant " + std::to_string(giant.num_nodes()) + " nodes");
    return out.commit();
  }

  std::filesystem::path weight() {
    ArtifactSet out(dir("weight"), "weight");
    const auto giant = load_graph(out, "graph-build", "giant_nodes.csv", "giant_edges.csv");
    const auto theta = load_theta(out);
    const auto result = weight_edges(giant, theta.as_map());
    out.output("weighted_nodes.csv", export_nodes_csv(result.graph));
    out.output("weighted_edges.csv", export_edges_csv(result.graph));
    out.output("fallback.json", dump_json({{"fallback_weight", result.fallback_weight},
                                           {"vectored_edges", result.vectored_edges},
                                           {"fallback_edges", result.fallback_edges}}));
    log_info("weight: " + std::to_string(result.vectored_edges) + " cosine-weighted edges, " +
             std::to_string(result.fallback_edges) + " at median " +
             format_fixed(result.fallback_weight, 3));
    return out.commit();
  }

  std::filesystem::path communities(bool weighted) {
    const std::string name = weighted ? "communities-weighted" : "communities";
    ArtifactSet out(dir(name), name);
    const auto g = weighted
                       ? load_graph(out, "weight", "weighted_nodes.csv", "weighted_edges.csv")
                       : load_graph(out, "graph-build", "giant_nodes.csv", "giant_edges.csv");
    nlohmann::json summaries = nlohmann::json::array();
    nlohmann::json seeds = nlohmann::json::object();
    std::string counts;
    for (double gamma : cfg_.louvain.resolutions) {
      std::optional<LouvainResult> best;
      std::uint64_t best_seed = 0;
      for (std::size_t r = 0; r < cfg_.louvain.restarts; ++r) {
        const auto seed = cfg_.louvain.seed + r;
        auto result = louvain(g, gamma, seed);
        if (!best || result.modularity > best->modularity) {
          best = std::move(result);
          best_seed = seed;
        }
      }
      out.output(partition_file(gamma), export_partition_csv(best->partition));
      auto s = partition_summary(best->partition, best->modularity, gamma, best_seed);
      s["file"] = partition_file(gamma);
      s["levels"] = best->levels;
      summaries.push_back(std::move(s));
      seeds[gamma_tag(gamma)] = best_seed;
      counts += (counts.empty() ? "" : ", ") + std::string("gamma ") + gamma_tag(gamma) + ": " +
                std::to_string(best->partition.num_communities()) + " communities, Q " +
                format_fixed(best->modularity, 4);
    }
    out.output("summary.json", dump_json({{"weighted", weighted}, {"partitions", summaries}}));
    out.parameters() = to_json(cfg_.louvain);
    out.parameters()["weighted"] = weighted;
    out.seeds() = seeds;
    log_info(name + ": " + counts);
    return out.commit();
  }

  std::filesystem::path evaluate() {
    ArtifactSet out(dir("evaluate"), "evaluate");
    const auto corpus = load_source_corpus(out);
    const auto labels = load_labels(out);
    const auto theta = load_theta(out);
    const auto thetas = theta.as_map();
    const auto K = theta.num_topics();
    if (cfg_.evaluate.topic && *cfg_.evaluate.topic >= K) {
      throw ValidationError("evaluate.topic is " + std::to_string(*cfg_.evaluate.topic) +
                            " but the trained model has " + std::to_string(K) + " topics");
    }

    std::vector<std::pair<std::string, Partition>> methods;
    std::vector<std::uint32_t> clusters(theta.primary.begin(), theta.primary.end());
    methods.emplace_back("lda", Partition::from_labels(theta.ids, clusters));
    const auto file = partition_file(cfg_.evaluate.resolution);
    methods.emplace_back("communities",
                         import_partition_csv(require(out, "communities", file)));
    if (cfg_.evaluate.weighted) {
      methods.emplace_back("communities_weighted",
                           import_partition_csv(require(out, "communities-weighted", file)));
    }

    nlohmann::json reports = nlohmann::json::object();
    std::string text;
    for (const auto& [method, p] : methods) {
      auto report = community_label_counts(p, labels, &corpus);
      const auto profiles = community_topic_profile(p, thetas, K);
      attach_profiles(report, profiles);
      if (cfg_.evaluate.topic || !cfg_.evaluate.key_cases.empty()) {
        report.candidate_communities = select_candidate_communities(
            p, profiles, cfg_.evaluate.topic, cfg_.evaluate.threshold, cfg_.evaluate.key_cases);
        report.retrieval =
            retrieval_metrics(members_of(p, report.candidate_communities), labels);
      }
      reports[method] = to_json(report);
      text += method + " (" + std::to_string(p.num_communities()) + " groups, " +
              std::to_string(p.num_nodes()) + " documents)\n";
      text += render_table(report);
      text += "\n";
    }
    if (cfg_.evaluate.weighted) {
      reports["nmi_unweighted_vs_weighted"] = nmi(methods[1].second, methods[2].second);
    }
    out.output("report.json", dump_json(reports));
    out.output("report.txt", text);
    out.parameters() = to_json(cfg_.evaluate);
    log_info("evaluate: " + std::to_string(methods.size()) + " methods against '" +
             labels.label_name + "' (" + std::to_string(labels.size()) + " cases)");
    return out.commit();
  }

  std::filesystem::path report() {
    ArtifactSet out(dir("report"), "report");
    auto read_json = [&](const std::string& sub, const std::string& file) {
      return nlohmann::json::parse(require(out, sub, file));
    };
    nlohmann::json bundle{{"version", kVersion},
                          {"census", read_json("ingest", "census.json")},
                          {"graph", read_json("graph-build", "census.json")},
                          {"coherence", read_json("lda-sweep", "coherence.json")},
                          {"topics", read_json("lda-train", "topics.json")}};
    bundle["partitions"]["unweighted"] = read_json("communities", "summary.json");
    if (cfg_.evaluate.weighted) {
      bundle["fallback"] = read_json("weight", "fallback.json");
      bundle["partitions"]["weighted"] = read_json("communities-weighted", "summary.json");
    }
    bundle["evaluation"] = read_json("evaluate", "report.json");
    out.output("report.json", dump_json(bundle));
    log_info("report: bundle written");
    return out.commit();
  }

  void all() {
    ingest();
    preprocess();
    lda_train();
    lda_sweep();
    embed();
    graph_build();
    weight();
    communities(false);
    communities(true);
    evaluate();
    report();
  }

 private:
  RunConfig cfg_;

  std::string source(ArtifactSet& out, const std::string& spec) {
    auto contents = read_file(cfg_.resolve(spec));
    out.input(spec, contents);
    return contents;
  }

  // Reads an upstream artifact, failing with a hint when it is missing.
  std::string require(ArtifactSet& out, const std::string& subcommand, const std::string& file) {
    const auto path = dir(subcommand) / file;
    if (!std::filesystem::exists(path)) {
      const auto command = subcommand == "communities-weighted" ? std::string("communities --weighted")
                                                                 : subcommand;
      throw ValidationError("missing " + path.string() + "; run `lexcluster " + command +
                            "` first");
    }
    auto contents = read_file(path);
    out.input(subcommand + "/" + file, contents);
    return contents;
  }

  Corpus load_source_corpus(ArtifactSet& out) {
    const auto text = source(out, cfg_.paths.corpus);
    try {
      return parse_corpus(text);
    } catch (const ValidationError& e) {
      throw ValidationError(cfg_.resolve(cfg_.paths.corpus).string() + ": " + e.what());
    }
  }

  LabelSet load_labels(ArtifactSet& out) {
    const auto text = source(out, cfg_.paths.annotations);
    try {
      return parse_annotations(text, cfg_.evaluate.label);
    } catch (const ValidationError& e) {
      throw ValidationError(cfg_.resolve(cfg_.paths.annotations).string() + ": " + e.what());
    }
  }

  NormalizeConfig normalize_config(ArtifactSet& out) {
    NormalizeConfig norm;
    if (cfg_.textprep.default_stopwords) {
      norm = NormalizeConfig::english_defaults();
    } else {
      norm.month_names.insert(default_month_names().begin(), default_month_names().end());
    }
    for (const auto& s : cfg_.paths.stopwords) {
      source(out, s);
      load_stopwords(norm, cfg_.resolve(s));
    }
    for (const auto& g : cfg_.paths.gazetteers) {
      source(out, g);
      load_gazetteer(norm, cfg_.resolve(g));
    }
    if (!cfg_.paths.months.empty()) {
      source(out, cfg_.paths.months);
      load_month_names(norm, cfg_.resolve(cfg_.paths.months));
    }
    if (!cfg_.paths.lemmas.empty()) {
      source(out, cfg_.paths.lemmas);
      load_lemma_dictionary(norm, cfg_.resolve(cfg_.paths.lemmas));
    }
    norm.porter_stemming = cfg_.textprep.porter;
    norm.min_token_length = cfg_.textprep.min_token_length;
    return norm;
  }

  LdaParams lda_params(std::size_t topics, std::uint64_t seed) const {
    LdaParams p;
    p.num_topics = topics;
    p.alpha = cfg_.lda.alpha;
    p.beta = cfg_.lda.beta;
    p.iterations = cfg_.lda.iterations;
    p.burn_in = cfg_.lda.burn_in;
    p.seed = seed;
    return p;
  }

  BowTable load_bows(ArtifactSet& out) {
    return import_bow_jsonl(require(out, "preprocess", "bow.jsonl"));
  }

  Vocabulary load_vocabulary(ArtifactSet& out) {
    return import_vocabulary_csv(require(out, "preprocess", "vocabulary.csv"));
  }

  ThetaTable load_theta(ArtifactSet& out) {
    return import_theta_csv(require(out, "lda-train", "theta.csv"));
  }

  CitationGraph load_graph(ArtifactSet& out, const std::string& subcommand,
                           const std::string& nodes, const std::string& edges) {
    const auto n = require(out, subcommand, nodes);
    const auto e = require(out, subcommand, edges);
    return import_graph_csv(n, e);
  }
};

}  // namespace lexcluster
