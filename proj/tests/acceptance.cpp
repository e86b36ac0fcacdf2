// Acceptance gate: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit status is non-zero when
// any criterion fails.

#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>

#include "lexcluster/pipeline.hpp"
#include "support.hpp"

namespace lexcluster {
namespace {

namespace fs = std::filesystem;

const fs::path kData = LEXCLUSTER_TEST_DATA;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct RawEdge {
  std::size_t a, b;
  double w;
};

CitationGraph graph_of(std::size_t n, const std::vector<RawEdge>& edges) {
  CitationGraph g;
  for (std::size_t i = 0; i < n; ++i) g.add_node({(i < 10 ? "v0" : "v") + std::to_string(i)});
  for (const auto& e : edges) g.add_edge(static_cast<NodeId>(e.a), static_cast<NodeId>(e.b), e.w);
  return g;
}

// Q from the definition: (1/2m) sum_ij [A_ij - gamma k_i k_j / 2m] delta(c_i, c_j).
double reference_modularity(std::size_t n, const std::vector<RawEdge>& edges,
                            const std::vector<std::uint32_t>& label, double gamma) {
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (const auto& e : edges) {
    a[e.a][e.b] += e.w;
    a[e.b][e.a] += e.w;
  }
  std::vector<double> k(n, 0.0);
  double two_m = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) k[i] += a[i][j];
    two_m += k[i];
  }
  double q = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (label[i] == label[j]) q += a[i][j] - gamma * k[i] * k[j] / two_m;
    }
  }
  return q / two_m;
}

// Every set partition of n elements as a restricted growth string.
void for_each_partition(std::size_t n, const std::function<void(const std::vector<std::uint32_t>&)>& f) {
  std::vector<std::uint32_t> a(n, 0);
  std::function<void(std::size_t, std::uint32_t)> rec = [&](std::size_t i, std::uint32_t max) {
    if (i == n) {
      f(a);
      return;
    }
    for (std::uint32_t c = 0; c <= max + 1; ++c) {
      a[i] = c;
      rec(i + 1, std::max(max, c));
    }
  };
  rec(1, 0);
}

std::vector<RawEdge> random_connected(Rng& rng, std::size_t n) {
  std::vector<RawEdge> edges;
  std::set<std::pair<std::size_t, std::size_t>> have;
  auto add = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    if (a > b) std::swap(a, b);
    if (!have.insert({a, b}).second) return;
    const double w = rng.bernoulli(0.5) ? 1.0 : 0.1 + 2.0 * rng.uniform();
    edges.push_back({a, b, w});
  };
  for (std::size_t v = 1; v < n; ++v) add(v, rng.below(v));
  const auto extra = rng.below(n * 2);
  for (std::size_t i = 0; i < extra; ++i) add(rng.below(n), rng.below(n));
  return edges;
}

std::string fmt(double v, int digits = 4) { return format_fixed(v, digits); }

// ---------------------------------------------------------------------------

Outcome modularity_oracle() {
  Rng rng(1);
  std::size_t graphs = 0, below = 0, checked = 0;
  double max_q_error = 0.0, worst_ratio = 1.0;
  std::string first_failure;
  for (; graphs < 100; ++graphs) {
    const std::size_t n = 3 + rng.below(6);
    const auto edges = random_connected(rng, n);
    const auto g = graph_of(n, edges);
    double best = -1.0;
    for_each_partition(n, [&](const std::vector<std::uint32_t>& labels) {
      const double ref = reference_modularity(n, edges, labels, 1.0);
      max_q_error = std::max(max_q_error, std::abs(modularity(g, Partition(g, labels), 1.0) - ref));
      ++checked;
      best = std::max(best, ref);
    });
    double found = -1.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto r = louvain(g, 1.0, seed);
      const double ref = reference_modularity(n, edges, r.partition.membership(), 1.0);
      max_q_error = std::max(max_q_error, std::abs(r.modularity - ref));
      found = std::max(found, ref);
    }
    if (best > 0) worst_ratio = std::min(worst_ratio, found / best);
    if (found < 0.98 * best - 1e-12) {
      ++below;
      if (first_failure.empty()) {
        first_failure = "; first miss: graph " + std::to_string(graphs) + " (n=" +
                        std::to_string(n) + ") Q " + fmt(found) + " vs max " + fmt(best);
      }
    }
  }
  Outcome o;
  o.pass = max_q_error <= 1e-9 && below == 0;
  o.detail = std::to_string(checked) + " partitions, max |Q - reference| " +
             format_double(max_q_error) + "; " + std::to_string(graphs - below) + "/" +
             std::to_string(graphs) + " graphs reach 0.98 x exhaustive max (worst ratio " +
             fmt(worst_ratio) + ")" + first_failure;
  return o;
}

Outcome clique_ring_exact() {
  std::vector<RawEdge> edges;
  for (std::size_t c = 0; c < 4; ++c) {
    for (std::size_t i = 0; i < 5; ++i) {
      for (std::size_t j = i + 1; j < 5; ++j) edges.push_back({5 * c + i, 5 * c + j, 1});
    }
    edges.push_back({5 * c + 4, 5 * ((c + 1) % 4), 1});
  }
  const auto g = graph_of(20, edges);
  std::vector<std::uint32_t> cliques(20);
  for (std::size_t i = 0; i < 20; ++i) cliques[i] = static_cast<std::uint32_t>(i / 5);
  const Partition expected(g, cliques);
  std::size_t exact = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) exact += louvain(g, 1.0, seed).partition == expected;
  return {exact == 5, std::to_string(exact) + "/5 seeds recover the four cliques"};
}

Outcome resolution_fragments() {
  const auto g = build_graph(load_corpus(kData / "mini_corpus.jsonl")).graph;
  std::size_t ok = 0;
  std::string counts;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto c1 = louvain(g, 1.0, seed).partition.num_communities();
    const auto c3 = louvain(g, 3.0, seed).partition.num_communities();
    ok += c3 > c1;
    counts += (seed > 1 ? ", " : "") + std::to_string(c1) + "->" + std::to_string(c3);
  }
  return {ok == 5, "communities gamma 1 -> 3 per seed: " + counts};
}

Outcome lda_conservation() {
  const auto english = filter_corpus(load_corpus(kData / "mini_corpus.jsonl"), Language::en, std::nullopt);
  const auto bag = testing::bag_corpus(english);
  std::size_t total = 0;
  for (const auto& b : bag.bows) total += bow_length(b);
  std::size_t sweeps = 0, violations = 0;
  auto observer = [&](const GibbsSweepState& s) {
    ++sweeps;
    const auto D = s.doc_topic_counts.rows(), K = s.doc_topic_counts.cols();
    const auto V = s.topic_word_counts.cols();
    std::vector<std::uint64_t> by_docs(K, 0);
    for (std::size_t d = 0; d < D; ++d) {
      std::uint64_t sum = 0;
      for (std::size_t k = 0; k < K; ++k) {
        sum += s.doc_topic_counts(d, k);
        by_docs[k] += s.doc_topic_counts(d, k);
      }
      violations += sum != s.doc_lengths[d];
    }
    std::uint64_t grand = 0;
    for (std::size_t k = 0; k < K; ++k) {
      std::uint64_t by_words = 0;
      for (std::size_t w = 0; w < V; ++w) by_words += s.topic_word_counts(k, w);
      violations += by_words != s.topic_totals[k];
      violations += by_docs[k] != s.topic_totals[k];
      grand += s.topic_totals[k];
    }
    violations += grand != total;
  };
  LdaParams p;
  p.num_topics = 3;
  p.iterations = 200;
  p.burn_in = 50;
  p.seed = 7;
  const auto model = train_lda(bag.bows, p, bag.ids, bag.vocab.size(), observer);
  double worst = 0.0;
  auto check_rows = [&](const Matrix<double>& m) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
      const auto row = m.row(r);
      worst = std::max(worst, std::abs(std::accumulate(row.begin(), row.end(), 0.0) - 1.0));
    }
  };
  check_rows(model.phi);
  check_rows(model.theta);
  return {sweeps == 200 && violations == 0 && worst <= 1e-9,
          std::to_string(sweeps) + " sweeps over " + std::to_string(total) + " tokens, " +
              std::to_string(violations) + " count violations, max row-sum error " +
              format_double(worst)};
}

Outcome planted_topics() {
  std::size_t good = 0;
  std::string overlaps;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SynthParams sp;
    sp.doc_count = 500;
    sp.topics = 2;
    sp.vocab_per_topic = 50;
    sp.separation = 0.9;
    sp.seed = seed;
    const auto synth = synth_corpus(sp);
    const auto bag = testing::bag_corpus(synth.corpus);
    LdaParams p;
    p.num_topics = 2;
    p.iterations = 200;
    p.burn_in = 50;
    p.seed = seed;
    const auto model = train_lda(bag.bows, p, bag.ids, bag.vocab.size());
    const auto o = testing::matched_overlaps(model, testing::planted_vocabularies(sp, bag.vocab), 10);
    good += std::all_of(o.begin(), o.end(), [](std::size_t v) { return v >= 8; });
    overlaps += (seed > 1 ? " " : "") + std::to_string(*std::min_element(o.begin(), o.end()));
  }
  return {good >= 18, std::to_string(good) + "/20 seeds with top-10 overlap >= 8 for both topics (min overlap per seed: " + overlaps + ")"};
}

// Four planted communities on four distinct topics. Communities 0-1 and 2-3
// are densely cross-linked, so plain modularity prefers to merge each pair.
Outcome weighted_beats_unweighted() {
  std::size_t not_worse = 0, merged = 0;
  double total_gain = 0.0;
  std::string per_seed;
  const std::size_t runs = 20;
  for (std::uint64_t seed = 1; seed <= runs; ++seed) {
    SynthParams sp;
    sp.doc_count = 120;
    sp.topics = 4;
    sp.communities = 4;
    sp.vocab_per_topic = 30;
    sp.words_per_doc = 60;
    sp.separation = 0.8;
    sp.p_intra = 0.0;
    sp.p_inter = 0.0;
    sp.seed = seed;
    const auto synth = synth_corpus(sp);
    const auto& community = synth.truth.planted_community;
    const auto bag = testing::bag_corpus(synth.corpus);
    LdaParams lp;
    lp.num_topics = 4;
    lp.iterations = 200;
    lp.burn_in = 50;
    lp.seed = seed;
    const auto model = train_lda(bag.bows, lp, bag.ids, bag.vocab.size());
    ThetaMap thetas;
    for (std::size_t d = 0; d < model.num_docs(); ++d) {
      const auto row = model.theta_row(d);
      thetas.emplace(model.doc_keys[d], std::vector<double>(row.begin(), row.end()));
    }

    CitationGraph g;
    for (const auto& doc : synth.corpus) g.add_node({doc.case_id, doc.language, doc.doc_type});
    Rng rng(derive_seed(seed, 99));
    for (NodeId j = 1; j < g.num_nodes(); ++j) {
      for (NodeId i = 0; i < j; ++i) {
        const auto ci = community[i], cj = community[j];
        const double p = ci == cj ? 0.3 : (ci / 2 == cj / 2 ? 0.15 : 0.01);
        if (rng.bernoulli(p)) g.add_edge(i, j);
      }
    }
    const auto census = components(g);
    const auto giant = subgraph(g, census, *census.giant);
    std::vector<std::string> ids;
    for (const auto& n : giant.nodes()) ids.push_back(n.case_id);
    const auto truth = restrict_partition(planted_partition(synth), ids);

    const auto plain = louvain(giant, 1.0, seed).partition;
    const auto weighted = louvain(weight_edges(giant, thetas).graph, 1.0, seed).partition;
    const double nmi_plain = nmi(plain, truth), nmi_weighted = nmi(weighted, truth);
    merged += plain.num_communities() < truth.num_communities();
    not_worse += nmi_weighted >= nmi_plain;
    total_gain += nmi_weighted - nmi_plain;
    per_seed += (seed > 1 ? " " : "") + fmt(nmi_plain, 2) + "/" + fmt(nmi_weighted, 2);
  }
  const double mean_gain = total_gain / static_cast<double>(runs);
  return {not_worse * 5 >= runs * 4 && mean_gain > 0.05,
          std::to_string(not_worse) + "/20 seeds weighted NMI >= unweighted, mean gain " +
              fmt(mean_gain) + "; unweighted merged planted communities in " +
              std::to_string(merged) + "/20 (NMI unweighted/weighted: " + per_seed + ")"};
}

Outcome fallback_median() {
  const double s = std::sqrt(1.0 - 0.755 * 0.755);
  ThetaMap thetas{{"a", {1.0, 0.0}}, {"b", {0.0, 1.0}}, {"c", {0.6, 0.8}}, {"d", {0.0, 1.0}},
                  {"p", {1.0, 0.0}}, {"q", {0.755, s}}};
  auto make = [](std::size_t english, const std::vector<std::pair<std::string, std::string>>& edges) {
    CitationGraph g;
    const std::vector<std::string> en{"a", "b", "c", "d"};
    for (std::size_t i = 0; i < english; ++i) g.add_node({en[i], Language::en, DocType::judgment});
    g.add_node({"f1", Language::fr, DocType::judgment});
    g.add_node({"f2", Language::fr, DocType::decision});
    for (const auto& [u, v] : edges) g.add_edge(*g.find(u), *g.find(v));
    return g;
  };
  bool ok = true;
  std::string detail;
  // Odd count: cosines {0, 0.6, 0.8}, median 0.6.
  {
    const auto r = weight_edges(make(3, {{"a", "b"}, {"a", "c"}, {"b", "c"}, {"a", "f1"}, {"f1", "f2"}}), thetas);
    const bool exact = std::abs(r.fallback_weight - 0.6) <= 1e-15 && r.vectored_edges == 3 &&
                       r.fallback_edges == 2 &&
                       r.graph.edge(*r.graph.find_edge(*r.graph.find("a"), *r.graph.find("f1"))).weight ==
                           r.fallback_weight;
    ok = ok && exact;
    detail += "odd-count median " + format_double(r.fallback_weight);
  }
  // Even count: cosines {0, 0.6, 0.8, 0.8}, median (0.6 + 0.8) / 2.
  {
    const auto r = weight_edges(
        make(4, {{"a", "b"}, {"a", "c"}, {"b", "c"}, {"c", "d"}, {"d", "f2"}, {"f1", "f2"}}), thetas);
    ok = ok && std::abs(r.fallback_weight - 0.7) <= 1e-15 && r.fallback_edges == 2;
    detail += ", even-count mean of central pair " + format_double(r.fallback_weight);
  }
  // A cosine of exactly the full-data median reported for the original corpus.
  {
    CitationGraph g;
    g.add_node({"p", Language::en, DocType::judgment});
    g.add_node({"q", Language::en, DocType::judgment});
    g.add_node({"f1", Language::fr, DocType::judgment});
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    const auto r = weight_edges(g, thetas);
    ok = ok && std::abs(r.fallback_weight - 0.755) <= 1e-12;
    detail += ", single-edge median " + fmt(r.fallback_weight, 3);
  }
  return {ok, detail};
}

Outcome umass_toy() {
  // Ten documents over w0..w3:
  //   D(w0)=5, D(w1)=4, D(w2)=3, D(w3)=2, D(w0,w1)=3, D(w0,w2)=2, D(w1,w2)=1, D(w2,w3)=0.
  const std::vector<std::vector<WordId>> docs{{0, 1, 2}, {0, 1}, {0, 1}, {0, 2}, {0},
                                              {2},       {1},    {3},    {3},    {}};
  std::vector<BowVector> bows;
  for (const auto& d : docs) {
    BowVector b;
    for (auto w : d) b.push_back({w, 1});
    bows.push_back(b);
  }
  const auto got = umass_coherence_of({{0, 1, 2}, {2, 3}}, bows);
  const double expect0 = std::log(4.0 / 5.0) + std::log(3.0 / 5.0) + std::log(2.0 / 4.0);
  const double expect1 = std::log(1.0 / 3.0);
  const double err = std::max(std::abs(got[0] - expect0), std::abs(got[1] - expect1));

  const auto english = filter_corpus(load_corpus(kData / "mini_corpus.jsonl"), Language::en, std::nullopt);
  const auto bag = testing::bag_corpus(english);
  LdaParams base;
  base.iterations = 60;
  base.burn_in = 10;
  base.seed = 3;
  const auto table = coherence_sweep(bag.bows, 2, 5, base, 5, bag.ids, bag.vocab.size());
  bool rows_ok = table.size() == 4;
  double mean_err = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& r = table[i];
    rows_ok = rows_ok && r.num_topics == i + 2 && r.per_topic.size() == r.num_topics;
    const double mean = std::accumulate(r.per_topic.begin(), r.per_topic.end(), 0.0) /
                        static_cast<double>(r.per_topic.size());
    mean_err = std::max(mean_err, std::abs(mean - r.mean));
  }
  return {err <= 1e-12 && rows_ok && mean_err <= 1e-12,
          "toy coherence error " + format_double(err) + "; sweep 2..5 gave " +
              std::to_string(table.size()) + " rows, max mean error " + format_double(mean_err)};
}

Outcome tsne_behaviour() {
  Rng rng(3);
  const std::size_t n = 60;
  Matrix<double> x(n, 5);
  std::vector<std::string> ids;
  std::vector<int> group;
  for (std::size_t i = 0; i < n; ++i) {
    const int g = static_cast<int>(i % 2);
    group.push_back(g);
    ids.push_back("d" + std::to_string(i));
    double sum = 0;
    for (std::size_t k = 0; k < 5; ++k) {
      x(i, k) = 0.02 + 0.05 * rng.uniform() + (static_cast<int>(k) == g ? 0.8 : 0.0);
      sum += x(i, k);
    }
    for (std::size_t k = 0; k < 5; ++k) x(i, k) /= sum;
  }
  TsneParams params;
  params.perplexity = 10;
  params.seed = 11;
  const auto a = tsne(ids, x, params);
  const auto b = tsne(ids, x, params);

  std::size_t rises = 0;
  for (std::size_t t = params.exaggeration_iterations; t + 50 < a.kl_trace.size(); ++t) {
    rises += a.kl_trace[t + 50] > a.kl_trace[t] + 1e-6;
  }
  double centroid[2][2] = {{0, 0}, {0, 0}};
  for (std::size_t i = 0; i < n; ++i) {
    centroid[group[i]][0] += a.coords[i][0] / (n / 2.0);
    centroid[group[i]][1] += a.coords[i][1] / (n / 2.0);
  }
  double intra = 0;
  for (std::size_t i = 0; i < n; ++i) {
    intra += std::hypot(a.coords[i][0] - centroid[group[i]][0], a.coords[i][1] - centroid[group[i]][1]);
  }
  intra /= static_cast<double>(n);
  const double ratio =
      std::hypot(centroid[0][0] - centroid[1][0], centroid[0][1] - centroid[1][1]) / intra;
  const bool same = a.coords == b.coords && a.kl_divergence == b.kl_divergence;
  return {rises == 0 && ratio > 3.0 && same,
          std::to_string(rises) + " rising 50-iteration windows after exaggeration, separation ratio " +
              fmt(ratio, 2) + ", " + (same ? "deterministic" : "NOT deterministic")};
}

Outcome pipeline_determinism() {
  const auto root = fs::temp_directory_path() / ("lexcluster_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  auto run = [&](const std::string& name) {
    const auto out = root / name;
    Pipeline(load_run_config(kData / "mini.toml", {"paths.output_dir=\"" + out.string() + "\""})).all();
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(out)) {
      if (e.is_regular_file()) files[fs::relative(e.path(), out).string()] = read_file(e.path());
    }
    return files;
  };
  const auto first = run("a"), second = run("b");
  std::size_t differing = 0;
  for (const auto& [file, contents] : first) {
    auto it = second.find(file);
    differing += it == second.end() || it->second != contents;
  }
  differing += second.size() - std::min(second.size(), first.size());
  std::size_t bad_manifests = 0;
  for (const auto& e : fs::directory_iterator(root / "a")) bad_manifests += !verify_manifest(e.path()).empty();
  fs::remove_all(root);
  return {differing == 0 && bad_manifests == 0 && !first.empty(),
          std::to_string(first.size()) + " artifacts, " + std::to_string(differing) +
              " differ between runs, " + std::to_string(bad_manifests) + " manifests fail verification"};
}

std::string record(const std::string& id, std::size_t i, const std::vector<std::string>& cites) {
  nlohmann::json j{{"case_id", id},           {"title", "Case " + id},
                   {"application_no", std::to_string(100 + i) + "/05"},
                   {"doc_type", i % 2 ? "decision" : "judgment"},
                   {"language", i % 7 == 3 ? "fr" : "en"},
                   {"date", "2005-06-07"},    {"cited_case_ids", cites},
                   {"text", "text"}};
  return j.dump() + "\n";
}

Outcome component_census() {
  // One giant of 40 (a path with chords), a triangle, three pairs, 25
  // singletons, and four citations to cases outside the corpus.
  std::string text;
  std::size_t next = 0;
  auto id = [](std::size_t i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "c%03zu", i);
    return std::string(buf);
  };
  for (std::size_t i = 0; i < 40; ++i, ++next) {
    std::vector<std::string> cites;
    if (i > 0) cites.push_back(id(i - 1));
    if (i >= 5 && i % 5 == 0) cites.push_back(id(i - 5));
    if (i % 13 == 0) cites.push_back("x" + std::to_string(i));
    text += record(id(next), next, cites);
  }
  const auto tri = next;
  text += record(id(tri), tri, {});
  text += record(id(tri + 1), tri + 1, {id(tri)});
  text += record(id(tri + 2), tri + 2, {id(tri), id(tri + 1)});
  next += 3;
  for (int pair = 0; pair < 3; ++pair, next += 2) {
    text += record(id(next), next, {id(next + 1)});
    text += record(id(next + 1), next + 1, {id(next)});
  }
  for (int s = 0; s < 25; ++s, ++next) text += record(id(next), next, {});
  const auto built = build_graph(parse_corpus(text));
  const auto c = components(built.graph);
  std::vector<std::size_t> expected{40, 3, 2, 2, 2};
  expected.resize(30, 1);
  const bool fixture_ok = c.sizes == expected && c.count() == 30 && c.singletons() == 25 &&
                          built.summary.dropped_citations == 4 && c.giant && *c.giant == 0;

  const auto mini = components(build_graph(load_corpus(kData / "mini_corpus.jsonl")).graph);
  const bool mini_ok = mini.sizes == std::vector<std::size_t>{24, 2, 1, 1, 1, 1};

  // Property suite against a union-find oracle.
  Rng rng(11);
  std::size_t violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.below(60);
    CitationGraph g;
    for (std::size_t i = 0; i < n; ++i) g.add_node({id(i)});
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t v) {
      return parent[v] == v ? v : parent[v] = find(parent[v]);
    };
    const auto edges = rng.below(n + 1);
    for (std::size_t e = 0; e < edges; ++e) {
      const auto a = rng.below(n), b = rng.below(n);
      if (a == b) continue;
      g.add_edge(static_cast<NodeId>(a), static_cast<NodeId>(b));
      parent[find(a)] = find(b);
    }
    const auto cc = components(g);
    std::map<std::size_t, std::size_t> oracle_sizes;
    for (std::size_t v = 0; v < n; ++v) ++oracle_sizes[find(v)];
    std::vector<std::size_t> want;
    for (auto [root, size] : oracle_sizes) want.push_back(size);
    std::sort(want.rbegin(), want.rend());
    violations += cc.sizes != want;
    violations += std::accumulate(cc.sizes.begin(), cc.sizes.end(), std::size_t{0}) != n;
    for (const auto& e : g.edges()) violations += cc.component_of[e.u] != cc.component_of[e.v];
    std::vector<std::size_t> tally(cc.count(), 0);
    for (std::size_t v = 0; v < n; ++v) ++tally[cc.component_of[v]];
    violations += tally != cc.sizes;
    for (std::size_t u = 0; u < n; ++u) {
      for (std::size_t v = u + 1; v < n; ++v) {
        violations += (find(u) == find(v)) != (cc.component_of[u] == cc.component_of[v]);
      }
    }
    violations += !cc.giant || cc.sizes[*cc.giant] != want.front();
  }
  return {fixture_ok && mini_ok && violations == 0,
          std::string("structural fixture ") + (fixture_ok ? "exact" : "WRONG") + " (" +
              std::to_string(c.count()) + " components, " + std::to_string(c.singletons()) +
              " singletons, giant " + std::to_string(c.sizes.empty() ? 0 : c.sizes[0]) +
              "), mini fixture " + (mini_ok ? "exact" : "WRONG") + ", " +
              std::to_string(violations) + " invariant violations over 1000 random graphs"};
}

struct Criterion {
  int number;
  const char* name;
  double limit_seconds;  // 0 when no runtime bound is stated
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace lexcluster

int main() {
  using namespace lexcluster;
  set_log_sink([](std::string_view, std::string_view) {});
  const std::vector<Criterion> criteria{
      {1, "modularity oracle", 120, modularity_oracle},
      {2, "louvain exact on clique ring", 1, clique_ring_exact},
      {3, "resolution fragments the fixture", 1, resolution_fragments},
      {4, "lda count conservation", 30, lda_conservation},
      {5, "planted topic recovery", 120, planted_topics},
      {6, "topic weighting helps louvain", 300, weighted_beats_unweighted},
      {7, "edge-weight median fallback", 0, fallback_median},
      {8, "umass coherence", 0, umass_toy},
      {9, "t-sne", 60, tsne_behaviour},
      {10, "end-to-end determinism", 60, pipeline_determinism},
      {11, "component census", 0, component_census},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0 && secs >= c.limit_seconds) {
      o.pass = false;
      o.detail += "; over the " + format_double(c.limit_seconds) + " s limit";
    }
    failed += !o.pass;
    std::printf("%s  %2d  %-34s %8.2f s  %s\n", o.pass ? "PASS" : "FAIL", c.number, c.name, secs,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
