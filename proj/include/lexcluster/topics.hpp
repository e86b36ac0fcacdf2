#pragma once

// Latent Dirichlet allocation trained by collapsed Gibbs sampling, UMass
// topic coherence, and topic-count sweeps.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "lexcluster/matrix.hpp"
#include "lexcluster/textprep.hpp"
#include "lexcluster/util.hpp"

namespace lexcluster {

struct LdaParams {
  std::size_t num_topics = 17;
  std::optional<double> alpha;  // defaults to 50 / K
  double beta = 0.01;
  std::size_t iterations = 1000;
  std::size_t burn_in = 200;
  std::uint64_t seed = 1;

  double resolved_alpha() const {
    return alpha ? *alpha : 50.0 / static_cast<double>(num_topics);
  }
};

struct TopicModel {
  std::size_t num_topics = 0;  // K
  std::size_t vocab_size = 0;  // V
  double alpha = 0.0;
  double beta = 0.0;
  std::uint64_t seed = 0;
  std::size_t iterations = 0;
  std::size_t burn_in = 0;

  std::vector<std::string> doc_keys;
  Matrix<std::uint32_t> topic_word_counts;  // n_kw, K x V
  Matrix<std::uint32_t> doc_topic_counts;   // n_dk, D x K
  std::vector<std::uint64_t> topic_totals;  // n_k

  Matrix<double> phi;    // K x V
  Matrix<double> theta;  // D x K

  // Collapsed log p(w | z) after each sweep from burn_in onwards.
  std::vector<double> log_likelihood_trace;

  std::size_t num_docs() const { return doc_topic_counts.rows(); }
  std::span<const double> theta_row(std::size_t d) const { return theta.row(d); }

  // Rebuilds topic_totals, phi and theta from the count matrices.
  void recompute_estimates() {
    const std::size_t K = num_topics, V = vocab_size, D = num_docs();
    topic_totals.assign(K, 0);
    for (std::size_t k = 0; k < K; ++k) {
      for (std::size_t w = 0; w < V; ++w) topic_totals[k] += topic_word_counts(k, w);
    }
    phi = Matrix<double>(K, V);
    const double vbeta = static_cast<double>(V) * beta;
    for (std::size_t k = 0; k < K; ++k) {
      const double denom = static_cast<double>(topic_totals[k]) + vbeta;
      for (std::size_t w = 0; w < V; ++w) {
        phi(k, w) = (static_cast<double>(topic_word_counts(k, w)) + beta) / denom;
      }
    }
    theta = Matrix<double>(D, K);
    const double kalpha = static_cast<double>(K) * alpha;
    for (std::size_t d = 0; d < D; ++d) {
      std::uint64_t len = 0;
      for (std::size_t k = 0; k < K; ++k) len += doc_topic_counts(d, k);
      const double denom = static_cast<double>(len) + kalpha;
      for (std::size_t k = 0; k < K; ++k) {
        theta(d, k) = (static_cast<double>(doc_topic_counts(d, k)) + alpha) / denom;
      }
    }
  }
};

// Read-only view of the sampler state handed to sweep observers.
struct GibbsSweepState {
  std::size_t sweep = 0;  // 1-based
  const Matrix<std::uint32_t>& doc_topic_counts;
  const Matrix<std::uint32_t>& topic_word_counts;
  const std::vector<std::uint64_t>& topic_totals;
  const std::vector<std::size_t>& doc_lengths;
};

using SweepObserver = std::function<void(const GibbsSweepState&)>;

namespace detail {

inline double collapsed_log_likelihood(const Matrix<std::uint32_t>& nkw,
                                       const std::vector<std::uint64_t>& nk, double beta) {
  const auto K = nkw.rows();
  const auto V = nkw.cols();
  const double vbeta = static_cast<double>(V) * beta;
  double ll = static_cast<double>(K) *
              (std::lgamma(vbeta) - static_cast<double>(V) * std::lgamma(beta));
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t w = 0; w < V; ++w) ll += std::lgamma(nkw(k, w) + beta);
    ll -= std::lgamma(static_cast<double>(nk[k]) + vbeta);
  }
  return ll;
}

inline std::size_t vocab_extent(const std::vector<BowVector>& bows) {
  std::size_t V = 0;
  for (const auto& bow : bows) {
    for (const auto& e : bow) V = std::max<std::size_t>(V, e.word + 1);
  }
  return V;
}

// Draws an index from unnormalized non-negative weights.
inline std::size_t sample_index(std::span<const double> cumulative, double u) {
  const double target = u * cumulative.back();
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
  if (it == cumulative.end()) --it;
  return static_cast<std::size_t>(it - cumulative.begin());
}

}  // namespace detail

// Trains LDA on `bows`. `doc_keys` (usually case ids) seed one RNG stream per
// document and fix the order documents are visited in, so permuting the input
// permutes theta rows and nothing else. Without keys, positions are used.
inline TopicModel train_lda(const std::vector<BowVector>& bows, const LdaParams& params,
                            std::vector<std::string> doc_keys = {},
                            std::size_t vocab_size = 0, const SweepObserver& observer = {}) {
  const std::size_t K = params.num_topics;
  if (K < 1) throw ValidationError("LDA: number of topics must be >= 1");
  if (!(params.iterations > params.burn_in)) {
    throw ValidationError("LDA: iterations must exceed burn_in");
  }
  if (!(params.beta > 0.0)) throw ValidationError("LDA: beta must be positive");
  const double alpha = params.resolved_alpha();
  if (!(alpha > 0.0)) throw ValidationError("LDA: alpha must be positive");
  if (doc_keys.empty()) {
    for (std::size_t d = 0; d < bows.size(); ++d) doc_keys.push_back(std::to_string(d));
  }
  if (doc_keys.size() != bows.size()) throw ValidationError("LDA: one key per document required");

  const std::size_t V = std::max(vocab_size, detail::vocab_extent(bows));
  const std::size_t D = bows.size();

  std::vector<std::vector<WordId>> words(D);
  std::vector<std::size_t> lengths(D, 0);
  std::size_t total_tokens = 0;
  for (std::size_t d = 0; d < D; ++d) {
    for (const auto& e : bows[d]) words[d].insert(words[d].end(), e.count, e.word);
    lengths[d] = words[d].size();
    total_tokens += lengths[d];
  }
  if (total_tokens == 0) throw ValidationError("LDA: every document is empty");
  if (K > total_tokens) {
    throw ValidationError("LDA: K=" + std::to_string(K) + " exceeds the total token count " +
                          std::to_string(total_tokens));
  }

  std::vector<std::size_t> order(D);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return doc_keys[a] < doc_keys[b]; });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (doc_keys[order[i - 1]] == doc_keys[order[i]]) {
      throw ValidationError("LDA: duplicate document key " + doc_keys[order[i]]);
    }
  }

  TopicModel model;
  model.num_topics = K;
  model.vocab_size = V;
  model.alpha = alpha;
  model.beta = params.beta;
  model.seed = params.seed;
  model.iterations = params.iterations;
  model.burn_in = params.burn_in;
  model.doc_keys = doc_keys;
  model.topic_word_counts = Matrix<std::uint32_t>(K, V, 0);
  model.doc_topic_counts = Matrix<std::uint32_t>(D, K, 0);
  model.topic_totals.assign(K, 0);

  auto& nkw = model.topic_word_counts;
  auto& ndk = model.doc_topic_counts;
  auto& nk = model.topic_totals;

  std::vector<Rng> rngs;
  rngs.reserve(D);
  for (std::size_t d = 0; d < D; ++d) {
    rngs.emplace_back(derive_seed(params.seed, fnv1a64(doc_keys[d])));
  }

  std::vector<std::vector<std::uint32_t>> z(D);
  for (std::size_t d : order) {
    z[d].resize(lengths[d]);
    for (std::size_t i = 0; i < lengths[d]; ++i) {
      const auto k = static_cast<std::uint32_t>(rngs[d].below(K));
      z[d][i] = k;
      ++ndk(d, k);
      ++nkw(k, words[d][i]);
      ++nk[k];
    }
  }

  const double vbeta = static_cast<double>(V) * params.beta;
  std::vector<double> cumulative(K);
  for (std::size_t sweep = 1; sweep <= params.iterations; ++sweep) {
    for (std::size_t d : order) {
      auto& rng = rngs[d];
      for (std::size_t i = 0; i < lengths[d]; ++i) {
        const WordId w = words[d][i];
        const std::uint32_t old = z[d][i];
        --ndk(d, old);
        --nkw(old, w);
        --nk[old];
        double acc = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
          acc += (ndk(d, k) + alpha) * (nkw(k, w) + params.beta) /
                 (static_cast<double>(nk[k]) + vbeta);
          cumulative[k] = acc;
        }
        const auto k = static_cast<std::uint32_t>(detail::sample_index(cumulative, rng.uniform()));
        z[d][i] = k;
        ++ndk(d, k);
        ++nkw(k, w);
        ++nk[k];
      }
    }
    if (sweep > params.burn_in) {
      model.log_likelihood_trace.push_back(
          detail::collapsed_log_likelihood(nkw, nk, params.beta));
    }
    if (observer) observer(GibbsSweepState{sweep, ndk, nkw, nk, lengths});
  }

  model.recompute_estimates();
  return model;
}

// Highest-probability words of a topic; ties go to the lower word id and n is
// clamped to V.
inline std::vector<std::pair<WordId, double>> top_words(const TopicModel& model,
                                                        std::size_t topic, std::size_t n) {
  if (topic >= model.num_topics) {
    throw ValidationError("topic " + std::to_string(topic) + " out of range (K=" +
                          std::to_string(model.num_topics) + ")");
  }
  if (n < 1) throw ValidationError("top_words: n must be >= 1");
  const auto row = model.phi.row(topic);
  std::vector<WordId> ids(row.size());
  std::iota(ids.begin(), ids.end(), WordId{0});
  n = std::min(n, ids.size());
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n), ids.end(),
                    [&](WordId a, WordId b) {
                      if (row[a] != row[b]) return row[a] > row[b];
                      return a < b;
                    });
  std::vector<std::pair<WordId, double>> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(ids[i], row[ids[i]]);
  return out;
}

// UMass coherence of ranked word lists:
//   sum_{i>=2} sum_{j<i} log((D(w_i, w_j) + 1) / D(w_j))
// with D counting documents. D(w_j) = 0 is clamped to 1 with a warning.
inline std::vector<double> umass_coherence_of(const std::vector<std::vector<WordId>>& ranked,
                                              const std::vector<BowVector>& bows) {
  std::set<WordId> needed;
  for (const auto& list : ranked) {
    if (list.size() < 2) throw ValidationError("UMass coherence needs at least 2 top words");
    needed.insert(list.begin(), list.end());
  }
  std::map<WordId, std::vector<std::uint32_t>> postings;
  for (WordId w : needed) postings[w];
  for (std::size_t d = 0; d < bows.size(); ++d) {
    for (const auto& e : bows[d]) {
      auto it = postings.find(e.word);
      if (it != postings.end()) it->second.push_back(static_cast<std::uint32_t>(d));
    }
  }
  auto co_count = [&](WordId a, WordId b) {
    const auto& pa = postings[a];
    const auto& pb = postings[b];
    std::size_t n = 0;
    auto ia = pa.begin();
    auto ib = pb.begin();
    while (ia != pa.end() && ib != pb.end()) {
      if (*ia < *ib) {
        ++ia;
      } else if (*ib < *ia) {
        ++ib;
      } else {
        ++n;
        ++ia;
        ++ib;
      }
    }
    return n;
  };

  std::vector<double> scores;
  scores.reserve(ranked.size());
  for (std::size_t t = 0; t < ranked.size(); ++t) {
    const auto& list = ranked[t];
    double score = 0.0;
    bool clamped = false;
    for (std::size_t i = 1; i < list.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        auto dj = postings[list[j]].size();
        if (dj == 0) {
          dj = 1;
          clamped = true;
        }
        const auto dij = co_count(list[i], list[j]);
        score += std::log((static_cast<double>(dij) + 1.0) / static_cast<double>(dj));
      }
    }
    if (clamped) {
      log_warning("UMass coherence: topic " + std::to_string(t) +
                  " has a top word with zero document frequency (clamped to 1)");
    }
    scores.push_back(score);
  }
  return scores;
}

inline std::vector<double> umass_coherence(const TopicModel& model,
                                           const std::vector<BowVector>& bows,
                                           std::size_t top_n) {
  if (top_n < 2) throw ValidationError("UMass coherence: top_n must be >= 2");
  std::vector<std::vector<WordId>> ranked;
  for (std::size_t k = 0; k < model.num_topics; ++k) {
    std::vector<WordId> ids;
    for (auto [w, p] : top_words(model, k, top_n)) ids.push_back(w);
    ranked.push_back(std::move(ids));
  }
  return umass_coherence_of(ranked, bows);
}

struct CoherenceRow {
  std::size_t num_topics = 0;
  std::vector<double> per_topic;
  double mean = 0.0;
};

using CoherenceTable = std::vector<CoherenceRow>;

// One model per K in [k_min, k_max]; the run for K uses seed base.seed + K,
// and alpha 50/K unless base.alpha is set.
inline CoherenceTable coherence_sweep(const std::vector<BowVector>& bows, std::size_t k_min,
                                      std::size_t k_max, const LdaParams& base,
                                      std::size_t top_n = 10,
                                      const std::vector<std::string>& doc_keys = {},
                                      std::size_t vocab_size = 0) {
  if (k_min < 1 || k_max < k_min) throw ValidationError("coherence sweep: empty topic range");
  CoherenceTable table;
  for (std::size_t K = k_min; K <= k_max; ++K) {
    LdaParams p = base;
    p.num_topics = K;
    p.seed = base.seed + K;
    const auto model = train_lda(bows, p, doc_keys, vocab_size);
    CoherenceRow row;
    row.num_topics = K;
    row.per_topic = umass_coherence(model, bows, top_n);
    row.mean = std::accumulate(row.per_topic.begin(), row.per_topic.end(), 0.0) /
               static_cast<double>(row.per_topic.size());
    table.push_back(std::move(row));
  }
  return table;
}

// Argmax with ties going to the lowest index.
inline std::size_t primary_topic(std::span<const double> theta_row) {
  if (theta_row.empty()) throw ValidationError("primary_topic: empty vector");
  std::size_t best = 0;
  for (std::size_t k = 1; k < theta_row.size(); ++k) {
    if (theta_row[k] > theta_row[best]) best = k;
  }
  return best;
}

// Gibbs fold-in for an unseen document with the topic-word counts frozen.
inline std::vector<double> infer_theta(const TopicModel& model, const BowVector& bow,
                                       std::size_t iterations, std::uint64_t seed) {
  const std::size_t K = model.num_topics;
  std::vector<WordId> words;
  for (const auto& e : bow) {
    if (e.word < model.vocab_size) words.insert(words.end(), e.count, e.word);
  }
  if (words.empty()) {
    log_warning("infer_theta: empty document, returning the uniform prior mean");
    return std::vector<double>(K, 1.0 / static_cast<double>(K));
  }
  Rng rng(seed);
  std::vector<std::uint32_t> ndk(K, 0);
  std::vector<std::uint32_t> z(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    z[i] = static_cast<std::uint32_t>(rng.below(K));
    ++ndk[z[i]];
  }
  const double vbeta = static_cast<double>(model.vocab_size) * model.beta;
  std::vector<double> cumulative(K);
  for (std::size_t it = 0; it < iterations; ++it) {
    for (std::size_t i = 0; i < words.size(); ++i) {
      const WordId w = words[i];
      --ndk[z[i]];
      double acc = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        acc += (ndk[k] + model.alpha) * (model.topic_word_counts(k, w) + model.beta) /
               (static_cast<double>(model.topic_totals[k]) + vbeta);
        cumulative[k] = acc;
      }
      z[i] = static_cast<std::uint32_t>(detail::sample_index(cumulative, rng.uniform()));
      ++ndk[z[i]];
    }
  }
  std::vector<double> theta(K);
  const double denom = static_cast<double>(words.size()) + static_cast<double>(K) * model.alpha;
  for (std::size_t k = 0; k < K; ++k) theta[k] = (ndk[k] + model.alpha) / denom;
  return theta;
}

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

inline constexpr int kModelFormatVersion = 1;

inline nlohmann::json model_to_json(const TopicModel& model, const Vocabulary& vocab) {
  nlohmann::json j;
  j["format"] = "lexcluster-lda";
  j["version"] = kModelFormatVersion;
  j["K"] = model.num_topics;
  j["V"] = model.vocab_size;
  j["alpha"] = model.alpha;
  j["beta"] = model.beta;
  j["seed"] = model.seed;
  j["iterations"] = model.iterations;
  j["burn_in"] = model.burn_in;
  j["vocabulary"] = vocab.words();
  j["doc_frequency"] = vocab.doc_frequencies();
  j["doc_keys"] = model.doc_keys;
  auto rows = [](const Matrix<std::uint32_t>& m) {
    nlohmann::json out = nlohmann::json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
      const auto row = m.row(r);
      out.push_back(std::vector<std::uint32_t>(row.begin(), row.end()));
    }
    return out;
  };
  j["n_kw"] = rows(model.topic_word_counts);
  j["n_dk"] = rows(model.doc_topic_counts);
  return j;
}

struct LoadedModel {
  TopicModel model;
  Vocabulary vocabulary;
};

inline LoadedModel model_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format") != "lexcluster-lda") throw ValidationError("not an LDA model file");
    if (j.at("version").get<int>() != kModelFormatVersion) {
      throw ValidationError("unsupported model version " + j.at("version").dump());
    }
    LoadedModel out;
    auto& m = out.model;
    m.num_topics = j.at("K").get<std::size_t>();
    m.vocab_size = j.at("V").get<std::size_t>();
    m.alpha = j.at("alpha").get<double>();
    m.beta = j.at("beta").get<double>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.iterations = j.at("iterations").get<std::size_t>();
    m.burn_in = j.at("burn_in").get<std::size_t>();
    m.doc_keys = j.at("doc_keys").get<std::vector<std::string>>();
    auto read = [](const nlohmann::json& rows, std::size_t nrows, std::size_t ncols,
                   const char* name) {
      if (rows.size() != nrows) throw ValidationError(std::string(name) + ": wrong row count");
      Matrix<std::uint32_t> mat(nrows, ncols);
      for (std::size_t r = 0; r < nrows; ++r) {
        const auto vals = rows[r].get<std::vector<std::uint32_t>>();
        if (vals.size() != ncols) throw ValidationError(std::string(name) + ": wrong row length");
        std::copy(vals.begin(), vals.end(), mat.row(r).begin());
      }
      return mat;
    };
    m.topic_word_counts = read(j.at("n_kw"), m.num_topics, m.vocab_size, "n_kw");
    m.doc_topic_counts = read(j.at("n_dk"), m.doc_keys.size(), m.num_topics, "n_dk");
    out.vocabulary = Vocabulary(j.at("vocabulary").get<std::vector<std::string>>(),
                                j.at("doc_frequency").get<std::vector<std::size_t>>());
    if (out.vocabulary.size() != m.vocab_size) {
      throw ValidationError("vocabulary size does not match V");
    }
    m.recompute_estimates();
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed model file: ") + e.what());
  }
}

// Top-n (word, weight) pairs per topic: word-cloud data.
inline nlohmann::json topic_report(const TopicModel& model, const Vocabulary& vocab,
                                   std::size_t n = 30) {
  nlohmann::json topics = nlohmann::json::array();
  for (std::size_t k = 0; k < model.num_topics; ++k) {
    nlohmann::json words = nlohmann::json::array();
    for (auto [w, p] : top_words(model, k, n)) {
      words.push_back({{"word", vocab.word(w)}, {"weight", p}});
    }
    topics.push_back({{"topic", k}, {"words", std::move(words)}});
  }
  return topics;
}

inline nlohmann::json to_json(const CoherenceTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : table) {
    rows.push_back({{"K", r.num_topics}, {"per_topic", r.per_topic}, {"mean", r.mean}});
  }
  return rows;
}

}  // namespace lexcluster
