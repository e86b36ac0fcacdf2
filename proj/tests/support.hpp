#pragma once

// Shared helpers for the test binaries.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "lexcluster/corpus.hpp"
#include "lexcluster/evaluate.hpp"
#include "lexcluster/textprep.hpp"
#include "lexcluster/topics.hpp"

namespace lexcluster::testing {

struct BagCorpus {
  std::vector<std::string> ids;
  Vocabulary vocab;
  std::vector<BowVector> bows;
};

// Whitespace-token corpus with no stopwords or document-frequency trimming.
inline BagCorpus bag_corpus(const Corpus& corpus) {
  NormalizeConfig cfg;
  std::vector<TokenList> docs;
  BagCorpus out;
  for (const auto& doc : corpus) {
    out.ids.push_back(doc.case_id);
    docs.push_back(normalize(doc.text, cfg));
  }
  out.vocab = build_vocabulary(docs, 1, 1.0);
  for (const auto& d : docs) out.bows.push_back(to_bow(d, out.vocab));
  return out;
}

// Planted vocabulary of each synthetic topic as word ids.
inline std::vector<std::set<WordId>> planted_vocabularies(const SynthParams& p, const Vocabulary& v) {
  std::vector<std::set<WordId>> out(p.topics);
  for (std::size_t t = 0; t < p.topics; ++t) {
    for (std::size_t j = 0; j < p.vocab_per_topic; ++j) {
      if (auto id = v.id(synth_topic_word(t, j))) out[t].insert(*id);
    }
  }
  return out;
}

// Overlap of each learned topic's top-n words with its greedily matched
// planted vocabulary: pairs are taken in order of decreasing overlap.
inline std::vector<std::size_t> matched_overlaps(const TopicModel& model,
                                                 const std::vector<std::set<WordId>>& planted,
                                                 std::size_t n) {
  const std::size_t K = model.num_topics;
  std::vector<std::vector<std::size_t>> overlap(K, std::vector<std::size_t>(planted.size(), 0));
  for (std::size_t k = 0; k < K; ++k) {
    for (auto [w, p] : top_words(model, k, n)) {
      for (std::size_t t = 0; t < planted.size(); ++t) overlap[k][t] += planted[t].count(w);
    }
  }
  std::vector<std::size_t> result;
  std::vector<bool> used_k(K, false), used_t(planted.size(), false);
  for (std::size_t round = 0; round < std::min(K, planted.size()); ++round) {
    std::size_t bk = 0, bt = 0;
    bool found = false;
    for (std::size_t k = 0; k < K; ++k) {
      for (std::size_t t = 0; t < planted.size(); ++t) {
        if (used_k[k] || used_t[t]) continue;
        if (!found || overlap[k][t] > overlap[bk][bt]) {
          bk = k;
          bt = t;
          found = true;
        }
      }
    }
    used_k[bk] = used_t[bt] = true;
    result.push_back(overlap[bk][bt]);
  }
  return result;
}

}  // namespace lexcluster::testing
