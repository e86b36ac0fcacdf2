#include "lexcluster/evaluate.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

namespace lexcluster {
namespace {

Partition part(std::vector<std::string> ids, std::vector<std::uint32_t> labels) {
  return Partition::from_labels(std::move(ids), labels);
}

LabelSet labels_of(std::set<std::string> ids) { return LabelSet{"eviction", std::move(ids)}; }

std::vector<std::string> node_ids(std::size_t n) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("n" + std::to_string(100 + i));
  return ids;
}

// NMI from raw label vectors via the contingency table.
double reference_nmi(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  const double n = static_cast<double>(a.size());
  std::map<std::uint32_t, double> pa, pb;
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> pab;
  for (std::size_t i = 0; i < a.size(); ++i) {
    pa[a[i]] += 1 / n;
    pb[b[i]] += 1 / n;
    pab[{a[i], b[i]}] += 1 / n;
  }
  double ha = 0, hb = 0, mi = 0;
  for (auto [k, p] : pa) ha -= p * std::log(p);
  for (auto [k, p] : pb) hb -= p * std::log(p);
  for (auto [k, p] : pab) mi += p * std::log(p / (pa[k.first] * pb[k.second]));
  return 2 * mi / (ha + hb);
}

TEST(LabelCountsTest, HandTabulation) {
  const auto p = part({"A", "B", "C"}, {0, 0, 1});
  const auto r = community_label_counts(p, labels_of({"A", "C"}));
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_EQ(r.rows[0].community, 0u);
  EXPECT_EQ(r.rows[0].size, 2u);
  EXPECT_EQ(r.rows[0].labelled, 1u);
  EXPECT_EQ(r.rows[1].community, 1u);
  EXPECT_EQ(r.rows[1].size, 1u);
  EXPECT_EQ(r.rows[1].labelled, 1u);
}

TEST(LabelCountsTest, EmptyAndFullLabelSets) {
  const auto p = part({"A", "B", "C"}, {0, 0, 1});
  for (const auto& row : community_label_counts(p, labels_of({})).rows) EXPECT_EQ(row.labelled, 0u);
  for (const auto& row : community_label_counts(p, labels_of({"A", "B", "C", "Z"})).rows) {
    EXPECT_EQ(row.labelled, row.size);
  }
}

TEST(LabelCountsTest, RowsSortedAndOutsideReported) {
  const auto p = part({"A", "B", "C", "D"}, {0, 1, 1, 2});
  const auto r = community_label_counts(p, labels_of({"B", "C", "X"}));
  EXPECT_EQ(r.rows[0].community, 1u);
  EXPECT_EQ(r.rows[0].labelled, 2u);
  EXPECT_EQ(r.labelled_outside, std::vector<std::string>{"X"});
}

TEST(LabelCountsTest, ConservationOnRandomInputs) {
  Rng rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = rng.below(20);
    const auto ids = node_ids(n);
    std::vector<std::uint32_t> labels(n);
    for (auto& l : labels) l = static_cast<std::uint32_t>(rng.below(5));
    const auto p = part(ids, labels);
    std::set<std::string> chosen;
    for (std::size_t i = 0; i < n + 5; ++i) {
      if (rng.bernoulli(0.4)) chosen.insert("n" + std::to_string(100 + i));
    }
    const auto set = labels_of(chosen);
    const auto r = community_label_counts(p, set);
    std::size_t total = r.labelled_outside.size();
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
      EXPECT_LE(r.rows[i].labelled, r.rows[i].size);
      if (i) {
        EXPECT_GE(r.rows[i - 1].labelled, r.rows[i].labelled);
      }
      total += r.rows[i].labelled;
    }
    EXPECT_EQ(total, set.size());
  }
}

TEST(LabelCountsTest, EnglishMembersCountedFromCorpus) {
  Corpus c;
  for (auto [id, lang] : {std::pair{"A", Language::en}, {"B", Language::fr}, {"C", Language::en}}) {
    Document d;
    d.case_id = id;
    d.language = lang;
    c.add(d);
  }
  const auto r = community_label_counts(part({"A", "B", "C"}, {0, 0, 1}), labels_of({}), &c);
  EXPECT_EQ(r.rows[0].english, 1u);
  EXPECT_EQ(r.rows[1].english, 1u);
}

TEST(TopicProfileTest, PrimaryTopicShares) {
  const auto p = part({"A", "B", "C", "D"}, {0, 0, 0, 0});
  ThetaMap thetas;
  for (auto id : {"A", "B", "C"}) {
    std::vector<double> t(8, 0.01);
    t[2] = 0.9;
    thetas[id] = t;
  }
  std::vector<double> t(8, 0.01);
  t[7] = 0.9;
  thetas["D"] = t;
  const auto prof = community_topic_profile(p, thetas, 8);
  EXPECT_DOUBLE_EQ(prof[0].topic_share[2], 0.75);
  EXPECT_DOUBLE_EQ(prof[0].topic_share[7], 0.25);
  EXPECT_EQ(prof[0].dominant_topic, 2u);
}

TEST(TopicProfileTest, UnmodelledCommunity) {
  const auto prof = community_topic_profile(part({"F1", "F2"}, {0, 0}), {}, 3);
  EXPECT_DOUBLE_EQ(prof[0].unmodelled_share, 1.0);
  EXPECT_FALSE(prof[0].dominant_topic.has_value());
}

TEST(TopicProfileTest, PlantedCommunitiesAreTopicallyPure) {
  SynthParams sp;
  sp.doc_count = 200;
  sp.seed = 4;
  const auto synth = synth_corpus(sp);
  const auto bag = testing::bag_corpus(synth.corpus);
  LdaParams lp;
  lp.num_topics = 2;
  lp.iterations = 100;
  lp.burn_in = 20;
  const auto model = train_lda(bag.bows, lp, bag.ids, bag.vocab.size());
  ThetaMap thetas;
  for (std::size_t d = 0; d < bag.ids.size(); ++d) {
    const auto row = model.theta_row(d);
    thetas[bag.ids[d]] = {row.begin(), row.end()};
  }
  for (const auto& prof : community_topic_profile(planted_partition(synth), thetas, 2)) {
    EXPECT_GE(prof.dominant_share, 0.9);
  }
}

TEST(RetrievalTest, Definitions) {
  const auto labels = labels_of({"A", "B"});
  const auto same = retrieval_metrics({"A", "B"}, labels);
  EXPECT_DOUBLE_EQ(same.precision, 1.0);
  EXPECT_DOUBLE_EQ(same.recall, 1.0);
  EXPECT_DOUBLE_EQ(same.f1, 1.0);
  const auto none = retrieval_metrics({"C"}, labels);
  EXPECT_DOUBLE_EQ(none.precision, 0.0);
  EXPECT_DOUBLE_EQ(none.recall, 0.0);
  EXPECT_DOUBLE_EQ(none.f1, 0.0);
  const auto empty = retrieval_metrics({}, labels);
  EXPECT_FALSE(empty.precision_defined);
  EXPECT_DOUBLE_EQ(empty.precision, 0.0);
}

TEST(RetrievalTest, PaperArithmetic) {
  std::set<std::string> truth, candidates;
  for (int i = 0; i < 211; ++i) truth.insert("t" + std::to_string(i));
  candidates = truth;
  for (int i = 0; i < 150; ++i) candidates.insert("x" + std::to_string(i));
  const auto m = retrieval_metrics(candidates, labels_of(truth));
  EXPECT_NEAR(m.precision, 211.0 / 361.0, 1e-15);
  EXPECT_DOUBLE_EQ(m.recall, 1.0);
}

TEST(CandidateSelectionTest, ThresholdAndKeyCases) {
  const auto p = part({"A", "B", "C", "D", "E"}, {0, 0, 1, 1, 2});
  ThetaMap thetas = {{"A", {0.9, 0.1}}, {"B", {0.8, 0.2}}, {"C", {0.4, 0.6}},
                     {"D", {0.9, 0.1}}, {"E", {0.1, 0.9}}};
  const auto profiles = community_topic_profile(p, thetas, 2);
  EXPECT_EQ(select_candidate_communities(p, profiles, 0, 0.4, {}), (std::vector<std::uint32_t>{0, 1}));
  EXPECT_EQ(select_candidate_communities(p, profiles, 0, 0.5, {}), (std::vector<std::uint32_t>{0}));
  ScopedLogCapture capture;
  EXPECT_EQ(select_candidate_communities(p, profiles, std::nullopt, 0.4, {"E", "missing"}),
            (std::vector<std::uint32_t>{2}));
  EXPECT_EQ(capture.warnings().size(), 1u);
  EXPECT_EQ(members_of(p, {0, 2}), (std::set<std::string>{"A", "B", "E"}));
}

TEST(NmiTest, Examples) {
  const auto ids = node_ids(4);
  EXPECT_DOUBLE_EQ(nmi(part(ids, {0, 0, 1, 1}), part(ids, {5, 5, 2, 2})), 1.0);
  EXPECT_DOUBLE_EQ(nmi(part(ids, {0, 0, 0, 0}), part(ids, {0, 1, 2, 3})), 0.0);
  EXPECT_NEAR(nmi(part(ids, {0, 0, 1, 1}), part(ids, {0, 1, 0, 1})), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(nmi(part(ids, {0, 0, 0, 0}), part(ids, {1, 1, 1, 1})), 1.0);
  EXPECT_THROW(nmi(part(ids, {0, 0, 0, 0}), part(node_ids(3), {0, 0, 0})), ValidationError);
}

TEST(NmiTest, MatchesReferenceAndIsSymmetric) {
  Rng rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = 2 + rng.below(30);
    const auto ids = node_ids(n);
    std::vector<std::uint32_t> a(n), b(n);
    for (auto& x : a) x = static_cast<std::uint32_t>(rng.below(4));
    for (auto& x : b) x = static_cast<std::uint32_t>(rng.below(4));
    const auto pa = part(ids, a), pb = part(ids, b);
    const double v = nmi(pa, pb);
    EXPECT_NEAR(v, nmi(pb, pa), 1e-12);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    if (pa.num_communities() > 1 && pb.num_communities() > 1) {
      EXPECT_NEAR(v, reference_nmi(a, b), 1e-12);
    }
    if (pa.num_communities() > 1) {
      EXPECT_DOUBLE_EQ(nmi(pa, pa), 1.0);
    }
  }
}

TEST(SynthTest, Deterministic) {
  SynthParams sp;
  sp.seed = 3;
  const auto a = synth_corpus(sp);
  const auto b = synth_corpus(sp);
  EXPECT_EQ(a.corpus, b.corpus);
  EXPECT_EQ(a.truth.planted_topic, b.truth.planted_topic);
  sp.seed = 4;
  EXPECT_NE(synth_corpus(sp).corpus, a.corpus);
}

TEST(SynthTest, FullSeparationGivesDisjointVocabularies) {
  SynthParams sp;
  sp.separation = 1.0;
  const auto s = synth_corpus(sp);
  std::vector<std::set<std::string>> seen(2);
  for (std::size_t d = 0; d < s.corpus.size(); ++d) {
    for (const auto& t : tokenize(s.corpus[d].text)) seen[s.truth.planted_topic[d]].insert(t);
  }
  for (const auto& w : seen[0]) EXPECT_FALSE(seen[1].count(w)) << w;
}

TEST(SynthTest, NoCrossEdgesKeepsCommunitiesApart) {
  SynthParams sp;
  sp.communities = 3;
  sp.p_inter = 0.0;
  sp.p_intra = 0.2;
  const auto s = synth_corpus(sp);
  const auto g = build_graph(s.corpus).graph;
  EXPECT_GE(components(g).count(), 3u);
  for (const auto& e : g.edges()) {
    EXPECT_EQ(s.truth.planted_community[e.u], s.truth.planted_community[e.v]);
  }
}

TEST(SynthTest, RoundTripsThroughCorpusFormat) {
  SynthParams sp;
  sp.french_fraction = 0.3;
  const auto s = synth_corpus(sp);
  EXPECT_EQ(parse_corpus(serialize_corpus(s.corpus)), s.corpus);
  EXPECT_EQ(tokenize(s.corpus[0].text).size(), sp.words_per_doc);
  EXPECT_EQ(normalize(s.corpus[0].text, NormalizeConfig::english_defaults()), tokenize(s.corpus[0].text));
}

TEST(SynthTest, RejectsBadParameters) {
  SynthParams sp;
  sp.p_intra = 1.5;
  EXPECT_THROW(synth_corpus(sp), ValidationError);
  sp = {};
  sp.doc_count = 0;
  EXPECT_THROW(synth_corpus(sp), ValidationError);
}

TEST(RenderTest, TableAndJson) {
  const auto p = part({"A", "B", "C"}, {0, 0, 1});
  auto r = community_label_counts(p, labels_of({"A", "Z"}));
  r.retrieval = retrieval_metrics({"A", "B"}, labels_of({"A", "Z"}));
  const auto table = render_table(r);
  EXPECT_NE(table.find("community"), std::string::npos);
  EXPECT_NE(table.find("outside the evaluated graph: 1"), std::string::npos);
  const auto j = to_json(r);
  EXPECT_EQ(j["rows"].size(), 2u);
  EXPECT_DOUBLE_EQ(j["retrieval"]["precision"].get<double>(), 0.5);
}

}  // namespace
}  // namespace lexcluster
