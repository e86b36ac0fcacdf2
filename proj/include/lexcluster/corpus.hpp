#pragma once

// Court-ruling corpus: loading, validation, filtering and census.

#include <algorithm>
#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "lexcluster/csv.hpp"
#include "lexcluster/util.hpp"

namespace lexcluster {

enum class DocType { judgment, decision };
enum class Language { en, fr };

inline std::string_view to_string(DocType t) { return t == DocType::judgment ? "judgment" : "decision"; }
inline std::string_view to_string(Language l) { return l == Language::en ? "en" : "fr"; }

inline std::optional<DocType> parse_doc_type(std::string_view s) {
  if (s == "judgment") return DocType::judgment;
  if (s == "decision") return DocType::decision;
  return std::nullopt;
}

inline std::optional<Language> parse_language(std::string_view s) {
  if (s == "en") return Language::en;
  if (s == "fr") return Language::fr;
  return std::nullopt;
}

struct Document {
  std::string case_id;
  std::string title;
  std::string application_no;
  DocType doc_type = DocType::judgment;
  Language language = Language::en;
  std::optional<int> importance;
  std::string date;  // ISO-8601 (YYYY-MM-DD), may be empty
  std::vector<std::string> cited_case_ids;
  std::string text;

  bool operator==(const Document&) const = default;
};

class Corpus {
 public:
  Corpus() = default;

  // Throws ValidationError on an empty or duplicate case id.
  void add(Document doc) {
    if (doc.case_id.empty()) throw ValidationError("document with empty case_id");
    auto [it, inserted] = index_.emplace(doc.case_id, documents_.size());
    if (!inserted) {
      throw ValidationError("duplicate case_id \"" + doc.case_id + "\" at positions " +
                            std::to_string(it->second) + " and " +
                            std::to_string(documents_.size()));
    }
    documents_.push_back(std::move(doc));
  }

  std::size_t size() const { return documents_.size(); }
  bool empty() const { return documents_.empty(); }
  const std::vector<Document>& documents() const { return documents_; }
  const Document& operator[](std::size_t i) const { return documents_[i]; }
  auto begin() const { return documents_.begin(); }
  auto end() const { return documents_.end(); }

  bool contains(std::string_view id) const { return index_.count(std::string(id)) > 0; }

  std::optional<std::size_t> position(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const Document* find(std::string_view id) const {
    auto pos = position(id);
    return pos ? &documents_[*pos] : nullptr;
  }

  bool operator==(const Corpus& other) const { return documents_ == other.documents_; }

 private:
  std::vector<Document> documents_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct LabelSet {
  std::string label_name;
  std::set<std::string> case_ids;

  bool contains(std::string_view id) const { return case_ids.count(std::string(id)) > 0; }
  std::size_t size() const { return case_ids.size(); }
};

namespace detail {

inline bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

}  // namespace detail

// Accepts YYYY-MM-DD with an optional time part starting at 'T'.
inline bool is_iso8601_date(std::string_view s) {
  if (s.size() < 10) return false;
  for (std::size_t i : {0, 1, 2, 3, 5, 6, 8, 9}) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  if (s[4] != '-' || s[7] != '-') return false;
  if (s.size() > 10 && s[10] != 'T') return false;
  const int year = std::stoi(std::string(s.substr(0, 4)));
  const int month = std::stoi(std::string(s.substr(5, 2)));
  const int day = std::stoi(std::string(s.substr(8, 2)));
  if (month < 1 || month > 12 || day < 1) return false;
  static constexpr std::array<int, 12> days{31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  int limit = days[static_cast<std::size_t>(month - 1)];
  if (month == 2 && detail::is_leap(year)) limit = 29;
  return day <= limit;
}

namespace detail {

inline std::string require_string(const nlohmann::json& rec, const char* key, std::size_t line) {
  auto it = rec.find(key);
  if (it == rec.end()) {
    throw ValidationError("line " + std::to_string(line) + ": missing required field '" + key + "'");
  }
  if (!it->is_string()) {
    throw ValidationError("line " + std::to_string(line) + ": field '" + key + "' must be a string");
  }
  return it->get<std::string>();
}

inline std::string optional_string(const nlohmann::json& rec, const char* key, std::size_t line) {
  auto it = rec.find(key);
  if (it == rec.end() || it->is_null()) return {};
  if (!it->is_string()) {
    throw ValidationError("line " + std::to_string(line) + ": field '" + key + "' must be a string");
  }
  return it->get<std::string>();
}

inline Document parse_record(const nlohmann::json& rec, std::size_t line) {
  const auto where = "line " + std::to_string(line) + ": ";
  if (!rec.is_object()) throw ValidationError(where + "record is not a JSON object");

  Document doc;
  doc.case_id = require_string(rec, "case_id", line);
  if (doc.case_id.empty()) throw ValidationError(where + "case_id is empty");

  const auto doc_type = require_string(rec, "doc_type", line);
  if (auto t = parse_doc_type(doc_type)) {
    doc.doc_type = *t;
  } else {
    throw ValidationError(where + "unknown value '" + doc_type + "' for field 'doc_type'");
  }
  const auto language = require_string(rec, "language", line);
  if (auto l = parse_language(language)) {
    doc.language = *l;
  } else {
    throw ValidationError(where + "unknown value '" + language + "' for field 'language'");
  }

  doc.text = require_string(rec, "text", line);
  doc.title = optional_string(rec, "title", line);
  doc.application_no = optional_string(rec, "application_no", line);
  doc.date = optional_string(rec, "date", line);
  if (!doc.date.empty() && !is_iso8601_date(doc.date)) {
    throw ValidationError(where + "field 'date' is not an ISO-8601 date: '" + doc.date + "'");
  }
  if (auto it = rec.find("importance"); it != rec.end() && !it->is_null()) {
    if (!it->is_number_integer()) {
      throw ValidationError(where + "field 'importance' must be an integer");
    }
    doc.importance = it->get<int>();
  }

  auto cites = rec.find("cited_case_ids");
  if (cites == rec.end()) {
    throw ValidationError(where + "missing required field 'cited_case_ids'");
  }
  if (!cites->is_array()) throw ValidationError(where + "field 'cited_case_ids' must be an array");
  std::unordered_set<std::string> seen;
  for (const auto& c : *cites) {
    if (!c.is_string()) throw ValidationError(where + "cited_case_ids entries must be strings");
    auto id = c.get<std::string>();
    if (id == doc.case_id) {
      log_warning(where + "dropped self-citation of " + id);
      continue;
    }
    if (seen.insert(id).second) doc.cited_case_ids.push_back(std::move(id));
  }
  return doc;
}

}  // namespace detail

// Parses JSON Lines text; blank lines are skipped but still counted.
inline Corpus parse_corpus(std::string_view text) {
  Corpus corpus;
  std::unordered_map<std::string, std::size_t> first_line;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (trim(lines[i]).empty()) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(lines[i]);
    } catch (const nlohmann::json::parse_error& e) {
      throw ValidationError("line " + std::to_string(line_no) + ": malformed JSON record (" +
                            e.what() + ")");
    }
    auto doc = detail::parse_record(rec, line_no);
    auto [it, inserted] = first_line.emplace(doc.case_id, line_no);
    if (!inserted) {
      throw ValidationError("duplicate case_id \"" + doc.case_id + "\" on lines " +
                            std::to_string(it->second) + " and " + std::to_string(line_no));
    }
    corpus.add(std::move(doc));
  }
  return corpus;
}

inline Corpus load_corpus(const std::filesystem::path& path) {
  try {
    return parse_corpus(read_file(path));
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

inline nlohmann::json to_json(const Document& doc) {
  nlohmann::json rec;
  rec["case_id"] = doc.case_id;
  rec["title"] = doc.title;
  rec["application_no"] = doc.application_no;
  rec["doc_type"] = std::string(to_string(doc.doc_type));
  rec["language"] = std::string(to_string(doc.language));
  rec["importance"] = doc.importance ? nlohmann::json(*doc.importance) : nlohmann::json(nullptr);
  rec["date"] = doc.date;
  rec["cited_case_ids"] = doc.cited_case_ids;
  rec["text"] = doc.text;
  return rec;
}

inline std::string serialize_corpus(const Corpus& corpus) {
  std::string out;
  for (const auto& doc : corpus) {
    out += to_json(doc).dump();
    out += '\n';
  }
  return out;
}

// Parses a `case_id,label` CSV and keeps the rows whose label equals `label`.
inline LabelSet parse_annotations(std::string_view text, std::string_view label) {
  LabelSet set;
  set.label_name = std::string(label);
  const auto lines = split_lines(text);
  if (lines.empty()) {
    log_warning("annotation file is empty");
    return set;
  }
  const auto header = csv::parse_line(lines[0]);
  if (header.size() < 2 || trim(header[0]) != "case_id" || trim(header[1]) != "label") {
    throw ValidationError("annotation file must start with header 'case_id,label'");
  }
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const auto fields = csv::parse_line(lines[i]);
    if (fields.size() < 2) {
      throw ValidationError("annotation line " + std::to_string(i + 1) + ": expected 2 fields");
    }
    if (trim(fields[1]) == label) set.case_ids.emplace(trim(fields[0]));
  }
  if (set.case_ids.empty()) {
    log_warning("no annotations carry the label '" + std::string(label) + "'");
  }
  return set;
}

inline LabelSet load_annotations(const std::filesystem::path& path, std::string_view label) {
  try {
    return parse_annotations(read_file(path), label);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

inline Corpus filter_corpus(const Corpus& corpus, std::optional<Language> language,
                            std::optional<DocType> doc_type) {
  Corpus out;
  for (const auto& doc : corpus) {
    if (language && doc.language != *language) continue;
    if (doc_type && doc.doc_type != *doc_type) continue;
    out.add(doc);
  }
  return out;
}

// Counts in the (en-judgment, en-decision, fr-decision, fr-judgment) layout.
struct Census {
  std::size_t en_judgment = 0;
  std::size_t en_decision = 0;
  std::size_t fr_decision = 0;
  std::size_t fr_judgment = 0;

  std::size_t total() const { return en_judgment + en_decision + fr_decision + fr_judgment; }
  std::array<std::size_t, 4> as_array() const {
    return {en_judgment, en_decision, fr_decision, fr_judgment};
  }
  bool operator==(const Census&) const = default;
};

inline Census corpus_census(const Corpus& corpus) {
  Census c;
  for (const auto& doc : corpus) {
    const bool judgment = doc.doc_type == DocType::judgment;
    if (doc.language == Language::en) {
      ++(judgment ? c.en_judgment : c.en_decision);
    } else {
      ++(judgment ? c.fr_judgment : c.fr_decision);
    }
  }
  return c;
}

inline nlohmann::json to_json(const Census& c) {
  return {{"en_judgment", c.en_judgment}, {"en_decision", c.en_decision},
          {"fr_decision", c.fr_decision}, {"fr_judgment", c.fr_judgment},
          {"total", c.total()}};
}

}  // namespace lexcluster
