#include "lexcluster/corpus.hpp"

#include <gtest/gtest.h>

#include <filesystem>

namespace lexcluster {
namespace {

std::string record(const std::string& id, const std::string& lang = "en",
                   const std::string& type = "judgment", const std::string& cites = "[]") {
  return R"({"case_id":")" + id + R"(","doc_type":")" + type + R"(","language":")" + lang +
         R"(","cited_case_ids":)" + cites + R"(,"text":"some text"})";
}

TEST(CorpusTest, LoadsRecordsInOrder) {
  const auto text = record("001-1") + "\n" + record("001-2") + "\n" + record("001-3") + "\n";
  const auto c = parse_corpus(text);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(*c.position("001-1"), 0u);
  EXPECT_EQ(*c.position("001-2"), 1u);
  EXPECT_EQ(*c.position("001-3"), 2u);
  EXPECT_EQ(c[1].case_id, "001-2");
}

TEST(CorpusTest, SelfCitationDroppedWithWarning) {
  ScopedLogCapture capture;
  const auto c = parse_corpus(record("A", "en", "judgment", R"(["A","B","B"])"));
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].cited_case_ids, std::vector<std::string>{"B"});
  ASSERT_EQ(capture.warnings().size(), 1u);
  EXPECT_NE(capture.warnings()[0].find("self-citation"), std::string::npos);
}

TEST(CorpusTest, DuplicateIdNamesBothLines) {
  const auto text = record("001-12345") + "\n" + record("001-12345") + "\n";
  try {
    parse_corpus(text);
    FAIL() << "expected a duplicate-id error";
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("001-12345"), std::string::npos);
    EXPECT_NE(msg.find("lines 1 and 2"), std::string::npos);
  }
}

TEST(CorpusTest, MalformedRecordNamesLine) {
  const auto text = record("a") + "\n{not json\n";
  try {
    parse_corpus(text);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(CorpusTest, UnknownEnumNamesFieldAndValue) {
  try {
    parse_corpus(record("a", "de"));
    FAIL();
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("language"), std::string::npos);
    EXPECT_NE(msg.find("'de'"), std::string::npos);
  }
  EXPECT_THROW(parse_corpus(record("a", "en", "opinion")), ValidationError);
}

TEST(CorpusTest, MissingRequiredFieldRejected) {
  EXPECT_THROW(parse_corpus(R"({"case_id":"a","doc_type":"judgment","language":"en","text":""})"),
               ValidationError);
}

TEST(CorpusTest, OptionalFieldsAndDateValidation) {
  const auto c = parse_corpus(
      R"({"case_id":"a","doc_type":"decision","language":"fr","cited_case_ids":[],"text":"",)"
      R"("title":"X v. Y","application_no":"123/45","importance":2,"date":"2004-02-29"})");
  EXPECT_EQ(c[0].importance, 2);
  EXPECT_EQ(c[0].date, "2004-02-29");
  EXPECT_THROW(parse_corpus(R"({"case_id":"a","doc_type":"decision","language":"fr",)"
                            R"("cited_case_ids":[],"text":"","date":"2003-02-29"})"),
               ValidationError);
  EXPECT_TRUE(is_iso8601_date("1999-05-03"));
  EXPECT_TRUE(is_iso8601_date("1999-05-03T00:00:00"));
  EXPECT_FALSE(is_iso8601_date("03/05/1999"));
  EXPECT_FALSE(is_iso8601_date("1999-13-01"));
}

TEST(CorpusTest, LoadingTwiceIsIdentical) {
  const auto path = std::filesystem::path(LEXCLUSTER_TEST_DATA) / "mini_corpus.jsonl";
  EXPECT_EQ(load_corpus(path), load_corpus(path));
}

TEST(AnnotationsTest, FiltersByLabel) {
  const std::string csv =
      "case_id,label\nA,eviction\nB,eviction\nC,eviction\nD,eviction\nE,other\n";
  EXPECT_EQ(parse_annotations(csv, "eviction").size(), 4u);
}

TEST(AnnotationsTest, DuplicateRowsCountOnce) {
  const std::string csv = "case_id,label\nA,eviction\nA,eviction\nB,eviction\n";
  EXPECT_EQ(parse_annotations(csv, "eviction").size(), 2u);
}

TEST(AnnotationsTest, AbsentLabelWarns) {
  ScopedLogCapture capture;
  const auto set = parse_annotations("case_id,label\nA,other\n", "eviction");
  EXPECT_EQ(set.size(), 0u);
  EXPECT_EQ(capture.warnings().size(), 1u);
}

TEST(AnnotationsTest, EmptyFileWarnsAndMissingHeaderFails) {
  ScopedLogCapture capture;
  EXPECT_EQ(parse_annotations("", "eviction").size(), 0u);
  EXPECT_FALSE(capture.warnings().empty());
  EXPECT_THROW(parse_annotations("A,eviction\n", "eviction"), ValidationError);
}

Corpus mixed_fixture() {
  return parse_corpus(record("e1", "en", "judgment") + "\n" + record("e2", "en", "decision") +
                      "\n" + record("f1", "fr", "decision") + "\n");
}

TEST(FilterTest, LanguageFilter) {
  EXPECT_EQ(filter_corpus(mixed_fixture(), Language::en, std::nullopt).size(), 2u);
}

TEST(FilterTest, NoFiltersIsIdentity) {
  const auto c = mixed_fixture();
  EXPECT_EQ(filter_corpus(c, std::nullopt, std::nullopt), c);
}

TEST(FilterTest, FiltersAreConjunctive) {
  const auto c = filter_corpus(mixed_fixture(), Language::en, DocType::decision);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].case_id, "e2");
}

TEST(CensusTest, EmptyCorpus) {
  EXPECT_EQ(corpus_census(Corpus{}).as_array(), (std::array<std::size_t, 4>{0, 0, 0, 0}));
}

TEST(CensusTest, TableLayoutOrder) {
  const auto c = parse_corpus(record("a", "en", "judgment") + "\n" + record("b", "en", "judgment") +
                              "\n" + record("c", "fr", "decision") + "\n");
  EXPECT_EQ(corpus_census(c).as_array(), (std::array<std::size_t, 4>{2, 0, 1, 0}));
}

TEST(CensusTest, CountsSumToCorpusSize) {
  const auto c = load_corpus(std::filesystem::path(LEXCLUSTER_TEST_DATA) / "mini_corpus.jsonl");
  EXPECT_EQ(corpus_census(c).total(), c.size());
}

TEST(CorpusTest, SerializeRoundTrip) {
  const auto c = load_corpus(std::filesystem::path(LEXCLUSTER_TEST_DATA) / "mini_corpus.jsonl");
  EXPECT_EQ(parse_corpus(serialize_corpus(c)), c);
}

}  // namespace
}  // namespace lexcluster
