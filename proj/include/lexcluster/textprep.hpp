#pragma once

// Text normalization and bag-of-words encoding.
//
// normalize() turns raw text into a list of lowercase word tokens:
//   1. split on non-alphanumeric code points (UTF-8 aware),
//   2. drop stopwords, tokens with digits, and dates ("3 May 1999", "May 1999"),
//   3. drop gazetteer entries (names, places; multi-word entries match as phrases),
//   4. map each token to its lemma (dictionary lookup, optional Porter stemming),
// with lowercasing done up front so every list lookup is case-insensitive.
// The filter/lemma stage is repeated until it reaches a fixed point, which
// makes normalize idempotent on its own (space-joined) output.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "lexcluster/porter.hpp"
#include "lexcluster/util.hpp"

namespace lexcluster {

using TokenList = std::vector<std::string>;

namespace utf8 {

inline std::vector<char32_t> decode(std::string_view s) {
  std::vector<char32_t> out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    char32_t cp = 0xFFFD;
    std::size_t len = 1;
    if (c < 0x80) {
      cp = c;
    } else if ((c >> 5) == 0x6) {
      len = 2;
    } else if ((c >> 4) == 0xE) {
      len = 3;
    } else if ((c >> 3) == 0x1E) {
      len = 4;
    }
    if (len > 1) {
      if (i + len > s.size()) {
        len = 1;
      } else {
        cp = c & (0x7F >> len);
        bool ok = true;
        for (std::size_t k = 1; k < len; ++k) {
          const auto cc = static_cast<unsigned char>(s[i + k]);
          if ((cc >> 6) != 0x2) {
            ok = false;
            break;
          }
          cp = (cp << 6) | (cc & 0x3F);
        }
        if (!ok) {
          cp = 0xFFFD;
          len = 1;
        }
      }
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

inline void append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

inline bool is_digit(char32_t cp) { return cp >= U'0' && cp <= U'9'; }

// Letters and digits. Outside ASCII this is an approximation that treats
// the Latin, Greek and Cyrillic letter blocks as word characters.
inline bool is_alnum(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z') || is_digit(cp);
  }
  if (cp == 0xAA || cp == 0xB5 || cp == 0xBA) return true;
  if (cp >= 0xC0 && cp <= 0x24F) return cp != 0xD7 && cp != 0xF7;
  if (cp >= 0x370 && cp <= 0x3FF) return cp != 0x37E && cp != 0x387;
  if (cp >= 0x400 && cp <= 0x4FF) return true;
  if (cp >= 0x1E00 && cp <= 0x1EFF) return true;
  return false;
}

inline char32_t to_lower(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 32;
  if (cp < 0x80) return cp;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;
  if (cp >= 0x100 && cp <= 0x137) return cp | 1;
  if (cp >= 0x139 && cp <= 0x148) return (cp & 1) ? cp + 1 : cp;
  if (cp >= 0x14A && cp <= 0x177) return cp | 1;
  if (cp == 0x178) return 0xFF;
  if (cp >= 0x179 && cp <= 0x17E) return (cp & 1) ? cp + 1 : cp;
  if (cp >= 0x391 && cp <= 0x3AB && cp != 0x3A2) return cp + 32;
  if (cp >= 0x410 && cp <= 0x42F) return cp + 32;
  if (cp >= 0x400 && cp <= 0x40F) return cp + 80;
  if (cp >= 0x1E00 && cp <= 0x1EFF) return cp | 1;
  return cp;
}

}  // namespace utf8

// Splits on non-alphanumeric code points and lowercases each piece.
inline TokenList tokenize(std::string_view text) {
  TokenList tokens;
  std::string current;
  for (char32_t cp : utf8::decode(text)) {
    if (utf8::is_alnum(cp)) {
      utf8::append(current, utf8::to_lower(cp));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

inline bool has_digit(std::string_view token) {
  return std::any_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; });
}

inline bool is_number(std::string_view token) {
  return !token.empty() &&
         std::all_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; });
}

// Code-point length, used for the minimum-token-length rule.
inline std::size_t token_length(std::string_view token) {
  return static_cast<std::size_t>(std::count_if(
      token.begin(), token.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

inline const std::vector<std::string>& default_english_stopwords() {
  static const std::vector<std::string> words = {
      "a", "about", "above", "after", "again", "against", "all", "also", "am", "an", "and",
      "any", "are", "as", "at", "be", "because", "been", "before", "being", "below",
      "between", "both", "but", "by", "can", "could", "did", "do", "does", "doing", "down",
      "during", "each", "either", "etc", "few", "for", "from", "further", "had", "has",
      "have", "having", "he", "her", "here", "hers", "herself", "him", "himself", "his",
      "how", "however", "i", "if", "in", "into", "is", "it", "its", "itself", "just", "may",
      "me", "might", "more", "most", "must", "my", "myself", "no", "nor", "not", "now", "of",
      "off", "on", "once", "only", "or", "other", "our", "ours", "ourselves", "out", "over",
      "own", "same", "shall", "she", "should", "so", "some", "such", "than", "that", "the",
      "their", "theirs", "them", "themselves", "then", "there", "therefore", "these", "they",
      "this", "those", "through", "thus", "to", "too", "under", "until", "up", "upon", "very",
      "was", "we", "were", "what", "when", "where", "whether", "which", "while", "who",
      "whom", "why", "will", "with", "within", "without", "would", "you", "your", "yours",
      "yourself", "yourselves"};
  return words;
}

inline const std::vector<std::string>& default_month_names() {
  static const std::vector<std::string> months = {
      "january", "february", "march",     "april",   "may",      "june",
      "july",    "august",   "september", "october", "november", "december"};
  return months;
}

struct NormalizeConfig {
  std::unordered_set<std::string> stopwords;
  // Names and places. Multi-word entries are stored token by token.
  std::vector<TokenList> gazetteer;
  std::unordered_map<std::string, std::string> lemmas;
  std::unordered_set<std::string> month_names;
  bool porter_stemming = false;
  std::size_t min_token_length = 2;

  static NormalizeConfig english_defaults() {
    NormalizeConfig cfg;
    cfg.stopwords.insert(default_english_stopwords().begin(), default_english_stopwords().end());
    cfg.month_names.insert(default_month_names().begin(), default_month_names().end());
    return cfg;
  }

  void add_gazetteer_entry(std::string_view entry) {
    auto tokens = tokenize(entry);
    if (!tokens.empty()) gazetteer.push_back(std::move(tokens));
  }

  // Lemmas that would tokenize into several pieces are rejected, since they
  // would break idempotence of normalize().
  void add_lemma(std::string_view surface, std::string_view lemma) {
    auto s = tokenize(surface);
    auto l = tokenize(lemma);
    if (s.size() != 1 || l.size() != 1) {
      log_warning("ignoring lemma entry '" + std::string(surface) + "' -> '" +
                  std::string(lemma) + "'");
      return;
    }
    lemmas[s[0]] = l[0];
  }
};

// One entry per line; blank lines and lines starting with '#' are skipped.
inline std::vector<std::string> load_word_list(const std::filesystem::path& path) {
  std::vector<std::string> out;
  for (const auto& line : split_lines(read_file(path))) {
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    out.emplace_back(t);
  }
  return out;
}

inline void load_stopwords(NormalizeConfig& cfg, const std::filesystem::path& path) {
  for (const auto& w : load_word_list(path)) {
    for (auto& t : tokenize(w)) cfg.stopwords.insert(std::move(t));
  }
}

inline void load_gazetteer(NormalizeConfig& cfg, const std::filesystem::path& path) {
  for (const auto& w : load_word_list(path)) cfg.add_gazetteer_entry(w);
}

inline void load_month_names(NormalizeConfig& cfg, const std::filesystem::path& path) {
  cfg.month_names.clear();
  for (const auto& w : load_word_list(path)) {
    for (auto& t : tokenize(w)) cfg.month_names.insert(std::move(t));
  }
}

// Lines are `surface<TAB>lemma`.
inline void load_lemma_dictionary(NormalizeConfig& cfg, const std::filesystem::path& path) {
  std::size_t line_no = 0;
  for (const auto& line : split_lines(read_file(path))) {
    ++line_no;
    if (trim(line).empty() || line.front() == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                            ": expected 'surface<TAB>lemma'");
    }
    cfg.add_lemma(trim(std::string_view(line).substr(0, tab)),
                  trim(std::string_view(line).substr(tab + 1)));
  }
}

namespace detail {

class Normalizer {
 public:
  explicit Normalizer(const NormalizeConfig& cfg) : cfg_(cfg) {
    for (const auto& entry : cfg.gazetteer) {
      TokenList filtered;
      for (const auto& t : entry) {
        if (!cfg.stopwords.count(t) && !has_digit(t)) filtered.push_back(t);
      }
      if (filtered.empty()) continue;
      max_phrase_ = std::max(max_phrase_, filtered.size());
      phrases_.insert(std::move(filtered));
    }
  }

  TokenList run(std::string_view text) const {
    TokenList tokens = drop_dates_and_numbers(tokenize(text));
    for (int round = 0; round < 32; ++round) {
      TokenList next = lemmatize(drop_gazetteer(drop_stopwords(tokens)));
      if (next == tokens) break;
      tokens = std::move(next);
    }
    return tokens;
  }

 private:
  const NormalizeConfig& cfg_;
  std::set<TokenList> phrases_;
  std::size_t max_phrase_ = 0;
  mutable PorterStemmer stemmer_;

  bool is_year(std::string_view t) const { return is_number(t) && t.size() == 4; }

  TokenList drop_dates_and_numbers(const TokenList& in) const {
    std::vector<bool> drop(in.size(), false);
    for (std::size_t i = 0; i < in.size(); ++i) {
      if (has_digit(in[i])) {
        drop[i] = true;
        continue;
      }
      if (!cfg_.month_names.count(in[i])) continue;
      const bool prev_number = i > 0 && is_number(in[i - 1]);
      const bool next_number = i + 1 < in.size() && is_number(in[i + 1]);
      const bool next_year = i + 1 < in.size() && is_year(in[i + 1]);
      // day-month-year, or month-year.
      if ((prev_number && next_number) || next_year) drop[i] = true;
    }
    TokenList out;
    for (std::size_t i = 0; i < in.size(); ++i) {
      if (!drop[i]) out.push_back(in[i]);
    }
    return out;
  }

  TokenList drop_stopwords(const TokenList& in) const {
    TokenList out;
    for (const auto& t : in) {
      if (token_length(t) < cfg_.min_token_length) continue;
      if (cfg_.stopwords.count(t) || has_digit(t)) continue;
      out.push_back(t);
    }
    return out;
  }

  // Longest match first.
  TokenList drop_gazetteer(const TokenList& in) const {
    if (phrases_.empty()) return in;
    TokenList out;
    std::size_t i = 0;
    while (i < in.size()) {
      std::size_t matched = 0;
      for (std::size_t len = std::min(max_phrase_, in.size() - i); len > 0; --len) {
        TokenList probe(in.begin() + static_cast<std::ptrdiff_t>(i),
                        in.begin() + static_cast<std::ptrdiff_t>(i + len));
        if (phrases_.count(probe)) {
          matched = len;
          break;
        }
      }
      if (matched) {
        i += matched;
      } else {
        out.push_back(in[i]);
        ++i;
      }
    }
    return out;
  }

  std::string lemma_of(const std::string& token) const {
    std::string current = token;
    // Follow dictionary chains to a fixed point. A cycle resolves to its
    // smallest member so every member maps to the same lemma.
    std::vector<std::string> chain{current};
    while (true) {
      auto it = cfg_.lemmas.find(current);
      if (it == cfg_.lemmas.end() || it->second == current) break;
      auto seen = std::find(chain.begin(), chain.end(), it->second);
      if (seen != chain.end()) {
        current = *std::min_element(seen, chain.end());
        break;
      }
      current = it->second;
      chain.push_back(current);
    }
    if (cfg_.porter_stemming && cfg_.lemmas.find(token) == cfg_.lemmas.end()) {
      for (int rounds = 0; rounds < 8; ++rounds) {
        auto next = stemmer_.stem(current);
        if (next == current) break;
        current = std::move(next);
      }
    }
    return current;
  }

  TokenList lemmatize(const TokenList& in) const {
    TokenList out;
    out.reserve(in.size());
    for (const auto& t : in) out.push_back(lemma_of(t));
    return out;
  }
};

}  // namespace detail

inline TokenList normalize(std::string_view text, const NormalizeConfig& config) {
  return detail::Normalizer(config).run(text);
}

// Reuses one Normalizer for a batch of texts.
inline std::vector<TokenList> normalize_all(const std::vector<std::string_view>& texts,
                                            const NormalizeConfig& config) {
  detail::Normalizer normalizer(config);
  std::vector<TokenList> out;
  out.reserve(texts.size());
  for (auto t : texts) out.push_back(normalizer.run(t));
  return out;
}

inline std::string join_tokens(const TokenList& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Vocabulary and bag of words
// ---------------------------------------------------------------------------

using WordId = std::uint32_t;

class Vocabulary {
 public:
  Vocabulary() = default;

  // `words` must be strictly increasing.
  Vocabulary(std::vector<std::string> words, std::vector<std::size_t> doc_freq)
      : words_(std::move(words)), doc_freq_(std::move(doc_freq)) {
    if (words_.size() != doc_freq_.size()) {
      throw Error("vocabulary: word and frequency lists differ in length");
    }
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (i > 0 && !(words_[i - 1] < words_[i])) {
        throw Error("vocabulary: words must be unique and sorted");
      }
      ids_.emplace(words_[i], static_cast<WordId>(i));
    }
  }

  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }
  const std::string& word(WordId id) const { return words_.at(id); }
  std::size_t doc_frequency(WordId id) const { return doc_freq_.at(id); }
  const std::vector<std::string>& words() const { return words_; }
  const std::vector<std::size_t>& doc_frequencies() const { return doc_freq_; }

  std::optional<WordId> id(std::string_view word) const {
    auto it = ids_.find(std::string(word));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }

  bool operator==(const Vocabulary& other) const {
    return words_ == other.words_ && doc_freq_ == other.doc_freq_;
  }

 private:
  std::vector<std::string> words_;
  std::vector<std::size_t> doc_freq_;
  std::unordered_map<std::string, WordId> ids_;
};

// Keeps words whose document frequency lies in [min_df, max_df_ratio * D].
inline Vocabulary build_vocabulary(const std::vector<TokenList>& docs, std::size_t min_df = 5,
                                   double max_df_ratio = 0.5) {
  if (min_df < 1) throw ValidationError("min_df must be >= 1");
  if (!(max_df_ratio > 0.0 && max_df_ratio <= 1.0)) {
    throw ValidationError("max_df_ratio must lie in (0, 1]");
  }
  std::map<std::string, std::size_t> df;
  for (const auto& doc : docs) {
    std::set<std::string_view> unique(doc.begin(), doc.end());
    for (auto w : unique) ++df[std::string(w)];
  }
  const double max_df = max_df_ratio * static_cast<double>(docs.size());
  std::vector<std::string> words;
  std::vector<std::size_t> freqs;
  for (const auto& [w, n] : df) {
    if (n >= min_df && static_cast<double>(n) <= max_df) {
      words.push_back(w);
      freqs.push_back(n);
    }
  }
  if (words.empty()) {
    throw ValidationError("vocabulary is empty after pruning (min_df=" + std::to_string(min_df) +
                          ", max_df_ratio=" + format_double(max_df_ratio) +
                          "); loosen the thresholds");
  }
  return Vocabulary(std::move(words), std::move(freqs));
}

struct BowEntry {
  WordId word = 0;
  std::uint32_t count = 0;
  bool operator==(const BowEntry&) const = default;
};

using BowVector = std::vector<BowEntry>;

inline std::size_t bow_length(const BowVector& bow) {
  std::size_t n = 0;
  for (const auto& e : bow) n += e.count;
  return n;
}

inline BowVector to_bow(const TokenList& tokens, const Vocabulary& vocab) {
  std::map<WordId, std::uint32_t> counts;
  for (const auto& t : tokens) {
    if (auto id = vocab.id(t)) ++counts[*id];
  }
  BowVector bow;
  bow.reserve(counts.size());
  for (auto [w, c] : counts) bow.push_back({w, c});
  return bow;
}

}  // namespace lexcluster
