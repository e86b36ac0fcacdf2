#pragma once

// Evaluation against ground-truth labels, partition agreement, and a
// synthetic corpus generator with planted topics and communities.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "lexcluster/community.hpp"
#include "lexcluster/corpus.hpp"
#include "lexcluster/topics.hpp"
#include "lexcluster/util.hpp"

namespace lexcluster {

struct EvalRow {
  std::uint32_t community = 0;
  std::size_t size = 0;
  std::size_t labelled = 0;
  std::size_t english = 0;
  std::optional<std::size_t> dominant_topic;
  double dominant_share = 0.0;
};

struct RetrievalMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool precision_defined = true;  // false when the candidate set is empty
  std::size_t candidates = 0;
  std::size_t relevant_retrieved = 0;
};

struct EvalReport {
  std::string label_name;
  std::size_t label_set_size = 0;
  std::vector<EvalRow> rows;  // sorted by labelled count, descending
  std::vector<std::string> labelled_outside;
  std::vector<std::uint32_t> candidate_communities;
  std::optional<RetrievalMetrics> retrieval;
};

// Rows sorted by labelled count (descending, ties by community id). Labelled
// ids missing from the partition are listed separately. `corpus`, when
// given, supplies the language for the English-member counts.
inline EvalReport community_label_counts(const Partition& p, const LabelSet& labels,
                                         const Corpus* corpus = nullptr) {
  EvalReport report;
  report.label_name = labels.label_name;
  report.label_set_size = labels.size();
  report.rows.resize(p.num_communities());
  for (std::uint32_t c = 0; c < p.num_communities(); ++c) report.rows[c].community = c;
  std::set<std::string> present;
  for (std::size_t i = 0; i < p.num_nodes(); ++i) {
    const auto& id = p.ids()[i];
    auto& row = report.rows[p.community_of(i)];
    ++row.size;
    present.insert(id);
    if (labels.contains(id)) ++row.labelled;
    if (corpus) {
      const auto* doc = corpus->find(id);
      if (doc && doc->language == Language::en) ++row.english;
    }
  }
  for (const auto& id : labels.case_ids) {
    if (!present.count(id)) report.labelled_outside.push_back(id);
  }
  std::stable_sort(report.rows.begin(), report.rows.end(), [](const EvalRow& a, const EvalRow& b) {
    return a.labelled > b.labelled;
  });
  return report;
}

struct TopicProfile {
  std::uint32_t community = 0;
  std::size_t size = 0;
  std::vector<double> topic_share;  // fraction of all members per primary topic
  double unmodelled_share = 0.0;
  std::optional<std::size_t> dominant_topic;
  double dominant_share = 0.0;
};

inline std::vector<TopicProfile> community_topic_profile(const Partition& p, const ThetaMap& thetas,
                                                         std::size_t num_topics) {
  std::vector<TopicProfile> profiles(p.num_communities());
  std::vector<std::vector<std::size_t>> counts(p.num_communities(),
                                               std::vector<std::size_t>(num_topics, 0));
  std::vector<std::size_t> unmodelled(p.num_communities(), 0);
  for (std::size_t i = 0; i < p.num_nodes(); ++i) {
    const auto c = p.community_of(i);
    ++profiles[c].size;
    auto it = thetas.find(p.ids()[i]);
    if (it == thetas.end()) {
      ++unmodelled[c];
      continue;
    }
    const auto k = primary_topic(it->second);
    if (k >= num_topics) throw ValidationError("topic vector longer than the topic count");
    ++counts[c][k];
  }
  for (std::uint32_t c = 0; c < p.num_communities(); ++c) {
    auto& prof = profiles[c];
    prof.community = c;
    const double n = static_cast<double>(prof.size);
    prof.topic_share.resize(num_topics);
    std::size_t best = 0;
    for (std::size_t k = 0; k < num_topics; ++k) {
      prof.topic_share[k] = static_cast<double>(counts[c][k]) / n;
      if (counts[c][k] > counts[c][best]) best = k;
    }
    prof.unmodelled_share = static_cast<double>(unmodelled[c]) / n;
    if (num_topics > 0 && counts[c][best] > 0) {
      prof.dominant_topic = best;
      prof.dominant_share = prof.topic_share[best];
    }
  }
  return profiles;
}

inline void attach_profiles(EvalReport& report, const std::vector<TopicProfile>& profiles) {
  for (auto& row : report.rows) {
    const auto& prof = profiles.at(row.community);
    row.dominant_topic = prof.dominant_topic;
    row.dominant_share = prof.dominant_share;
  }
}

inline RetrievalMetrics retrieval_metrics(const std::set<std::string>& candidates,
                                          const LabelSet& labels) {
  RetrievalMetrics m;
  m.candidates = candidates.size();
  for (const auto& id : candidates) m.relevant_retrieved += labels.contains(id);
  if (candidates.empty()) {
    m.precision_defined = false;
  } else {
    m.precision = static_cast<double>(m.relevant_retrieved) / static_cast<double>(candidates.size());
  }
  if (labels.size() > 0) {
    m.recall = static_cast<double>(m.relevant_retrieved) / static_cast<double>(labels.size());
  }
  if (m.precision + m.recall > 0.0) m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

// Communities whose share of `topic` exceeds `threshold`, plus every
// community holding one of `key_cases`.
inline std::vector<std::uint32_t> select_candidate_communities(
    const Partition& p, const std::vector<TopicProfile>& profiles, std::optional<std::size_t> topic,
    double threshold, const std::vector<std::string>& key_cases) {
  std::set<std::uint32_t> chosen;
  if (topic) {
    for (const auto& prof : profiles) {
      if (*topic < prof.topic_share.size() && prof.topic_share[*topic] > threshold) {
        chosen.insert(prof.community);
      }
    }
  }
  std::unordered_map<std::string, std::uint32_t> where;
  for (std::size_t i = 0; i < p.num_nodes(); ++i) where.emplace(p.ids()[i], p.community_of(i));
  for (const auto& key : key_cases) {
    if (auto it = where.find(key); it != where.end()) {
      chosen.insert(it->second);
    } else {
      log_warning("key case " + key + " is not in the evaluated partition");
    }
  }
  return {chosen.begin(), chosen.end()};
}

inline std::set<std::string> members_of(const Partition& p, const std::vector<std::uint32_t>& communities) {
  std::set<std::uint32_t> wanted(communities.begin(), communities.end());
  std::set<std::string> out;
  for (std::size_t i = 0; i < p.num_nodes(); ++i) {
    if (wanted.count(p.community_of(i))) out.insert(p.ids()[i]);
  }
  return out;
}

// Normalized mutual information, 2 I / (H1 + H2).
inline double nmi(const Partition& a, const Partition& b) {
  if (a.num_nodes() != b.num_nodes()) throw ValidationError("nmi: partitions cover different node sets");
  std::unordered_map<std::string, std::uint32_t> b_of;
  for (std::size_t i = 0; i < b.num_nodes(); ++i) b_of.emplace(b.ids()[i], b.community_of(i));
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> joint;
  for (std::size_t i = 0; i < a.num_nodes(); ++i) {
    auto it = b_of.find(a.ids()[i]);
    if (it == b_of.end()) throw ValidationError("nmi: node " + a.ids()[i] + " missing from second partition");
    ++joint[{a.community_of(i), it->second}];
  }
  const auto n = static_cast<double>(a.num_nodes());
  if (a.num_nodes() == 0) return 1.0;

  // Identical groupings: every row and column of the contingency table has
  // exactly one non-zero cell.
  const bool identical = joint.size() == a.num_communities() && joint.size() == b.num_communities();
  if (identical) return 1.0;

  auto entropy = [&](const Partition& p) {
    double h = 0.0;
    for (const auto& s : p.summaries()) {
      const double q = static_cast<double>(s.size) / n;
      if (q > 0.0) h -= q * std::log(q);
    }
    return h;
  };
  const double ha = entropy(a), hb = entropy(b);
  if (ha == 0.0 || hb == 0.0) return 0.0;
  double mi = 0.0;
  for (const auto& [cell, count] : joint) {
    const double pij = static_cast<double>(count) / n;
    const double pi = static_cast<double>(a.summaries()[cell.first].size) / n;
    const double pj = static_cast<double>(b.summaries()[cell.second].size) / n;
    mi += pij * std::log(pij / (pi * pj));
  }
  return std::clamp(2.0 * mi / (ha + hb), 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Synthetic corpora
// ---------------------------------------------------------------------------

struct SynthParams {
  std::size_t doc_count = 100;
  std::size_t topics = 2;
  std::size_t vocab_per_topic = 50;
  std::size_t words_per_doc = 80;
  double separation = 0.9;  // probability a token comes from the document's topic
  std::size_t communities = 2;
  double p_intra = 0.1;
  double p_inter = 0.01;
  double french_fraction = 0.0;
  std::uint64_t seed = 1;
};

struct SyntheticTruth {
  SynthParams params;
  std::vector<std::uint32_t> planted_topic;
  std::vector<std::uint32_t> planted_community;
};

struct SynthResult {
  Corpus corpus;
  SyntheticTruth truth;
};

namespace detail {

inline std::string letters(std::size_t value, std::size_t width) {
  std::string out(width, 'a');
  for (std::size_t i = width; i-- > 0;) {
    out[i] = static_cast<char>('a' + value % 26);
    value /= 26;
  }
  return out;
}

}  // namespace detail

// Alphabetic pseudo-words, so they survive normalization unchanged.
inline std::string synth_topic_word(std::size_t topic, std::size_t index) {
  return "k" + detail::letters(topic, 2) + "q" + detail::letters(index, 3);
}

inline std::string synth_background_word(std::size_t index) {
  return "zb" + detail::letters(index, 3);
}

inline std::string synth_case_id(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "001-%06zu", index + 1);
  return buf;
}

// Community c is planted on topic c % topics; document d sits in community
// d % communities. Citations go from the later to the earlier document.
inline SynthResult synth_corpus(const SynthParams& params) {
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (params.doc_count < 1 || params.topics < 1 || params.vocab_per_topic < 1 ||
      params.words_per_doc < 1 || params.communities < 1) {
    throw ValidationError("synth_corpus: counts must be positive");
  }
  if (params.vocab_per_topic > 26 * 26 * 26 || params.topics > 26 * 26) {
    throw ValidationError("synth_corpus: vocabulary too large for the word generator");
  }
  if (!prob(params.separation) || !prob(params.p_intra) || !prob(params.p_inter) ||
      !prob(params.french_fraction)) {
    throw ValidationError("synth_corpus: probabilities must lie in [0, 1]");
  }

  Rng rng(params.seed);
  SynthResult result;
  auto& truth = result.truth;
  truth.params = params;
  std::vector<Document> docs(params.doc_count);
  for (std::size_t d = 0; d < params.doc_count; ++d) {
    const auto community = static_cast<std::uint32_t>(d % params.communities);
    const auto topic = static_cast<std::uint32_t>(community % params.topics);
    truth.planted_community.push_back(community);
    truth.planted_topic.push_back(topic);
    auto& doc = docs[d];
    doc.case_id = synth_case_id(d);
    doc.title = "Synthetic case " + std::to_string(d + 1);
    doc.doc_type = d % 2 == 0 ? DocType::judgment : DocType::decision;
    doc.language = rng.bernoulli(params.french_fraction) ? Language::fr : Language::en;
    std::string text;
    for (std::size_t t = 0; t < params.words_per_doc; ++t) {
      if (t) text += ' ';
      if (rng.bernoulli(params.separation)) {
        text += synth_topic_word(topic, rng.below(params.vocab_per_topic));
      } else {
        text += synth_background_word(rng.below(params.vocab_per_topic));
      }
    }
    doc.text = std::move(text);
  }
  for (std::size_t j = 1; j < params.doc_count; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      const bool same = truth.planted_community[i] == truth.planted_community[j];
      if (rng.bernoulli(same ? params.p_intra : params.p_inter)) {
        docs[j].cited_case_ids.push_back(docs[i].case_id);
      }
    }
  }
  for (auto& doc : docs) result.corpus.add(std::move(doc));
  return result;
}

inline Partition planted_partition(const SynthResult& synth) {
  std::vector<std::string> ids;
  for (const auto& doc : synth.corpus) ids.push_back(doc.case_id);
  return Partition::from_labels(std::move(ids), synth.truth.planted_community);
}

// Restricts a partition to the listed ids (e.g. the nodes of a subgraph).
inline Partition restrict_partition(const Partition& p, const std::vector<std::string>& ids) {
  std::unordered_map<std::string, std::uint32_t> of;
  for (std::size_t i = 0; i < p.num_nodes(); ++i) of.emplace(p.ids()[i], p.community_of(i));
  std::vector<std::uint32_t> labels;
  for (const auto& id : ids) {
    auto it = of.find(id);
    if (it == of.end()) throw ValidationError("restrict_partition: unknown node " + id);
    labels.push_back(it->second);
  }
  return Partition::from_labels(ids, labels);
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

inline nlohmann::json to_json(const EvalReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"community", row.community},
                    {"size", row.size},
                    {"labelled", row.labelled},
                    {"english", row.english},
                    {"dominant_topic", row.dominant_topic ? nlohmann::json(*row.dominant_topic)
                                                          : nlohmann::json(nullptr)},
                    {"dominant_share", row.dominant_share}});
  }
  nlohmann::json j{{"label", r.label_name},
                   {"label_set_size", r.label_set_size},
                   {"rows", rows},
                   {"labelled_outside", r.labelled_outside},
                   {"candidate_communities", r.candidate_communities}};
  if (r.retrieval) {
    const auto& m = *r.retrieval;
    j["retrieval"] = {{"precision", m.precision},
                      {"recall", m.recall},
                      {"f1", m.f1},
                      {"precision_defined", m.precision_defined},
                      {"candidates", m.candidates},
                      {"relevant_retrieved", m.relevant_retrieved}};
  }
  return j;
}

// Aligned text table: community, size, labelled, English, dominant topic.
inline std::string render_table(const EvalReport& r, std::size_t max_rows = 0) {
  std::vector<std::vector<std::string>> cells;
  cells.push_back({"community", "size", r.label_name.empty() ? "labelled" : r.label_name,
                   "english", "dominant topic", "share"});
  std::size_t shown = 0;
  for (const auto& row : r.rows) {
    if (max_rows && shown++ >= max_rows) break;
    cells.push_back({std::to_string(row.community), std::to_string(row.size),
                     std::to_string(row.labelled), std::to_string(row.english),
                     row.dominant_topic ? std::to_string(*row.dominant_topic) : "-",
                     format_fixed(row.dominant_share, 2)});
  }
  std::vector<std::size_t> width(cells[0].size(), 0);
  for (const auto& line : cells) {
    for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
  }
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (std::size_t c = 0; c < cells[i].size(); ++c) {
      if (c) out += "  ";
      const auto pad = width[c] - cells[i][c].size();
      if (c == 0) {
        out += cells[i][c] + std::string(pad, ' ');
      } else {
        out += std::string(pad, ' ') + cells[i][c];
      }
    }
    out += '\n';
    if (i == 0) {
      std::size_t total = 0;
      for (auto w : width) total += w;
      out += std::string(total + 2 * (width.size() - 1), '-') + '\n';
    }
  }
  out += "labelled cases outside the evaluated graph: " + std::to_string(r.labelled_outside.size()) + '\n';
  if (r.retrieval) {
    const auto& m = *r.retrieval;
    out += "candidates " + std::to_string(m.candidates) + ", relevant retrieved " +
           std::to_string(m.relevant_retrieved) + ", precision " + format_fixed(m.precision, 3) +
           ", recall " + format_fixed(m.recall, 3) + ", F1 " + format_fixed(m.f1, 3) + '\n';
  }
  return out;
}

}  // namespace lexcluster
