#pragma once

// Run configuration: a small TOML subset parsed into JSON, then validated
// into a RunConfig. Every violation is collected before failing.

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "lexcluster/util.hpp"

namespace lexcluster {

// ---------------------------------------------------------------------------
// TOML subset: [section], key = value, strings, integers, floats, booleans,
// single-line arrays of those, '#' comments.
// ---------------------------------------------------------------------------

namespace toml {

class ValueParser {
 public:
  explicit ValueParser(std::string_view text) : s_(text) {}

  nlohmann::json parse_all() {
    auto v = value();
    skip_space();
    if (pos_ < s_.size()) fail("unexpected trailing characters");
    return v;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const { throw ValidationError(what); }

  void skip_space() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  nlohmann::json value() {
    skip_space();
    if (pos_ >= s_.size()) fail("missing value");
    const char c = s_[pos_];
    if (c == '"') return string();
    if (c == '[') return array();
    return bare();
  }

  nlohmann::json string() {
    ++pos_;
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      char c = s_[pos_++];
      if (c == '\\') {
        if (pos_ >= s_.size()) break;
        const char e = s_[pos_++];
        switch (e) {
          case 'n': c = '\n'; break;
          case 't': c = '\t'; break;
          case '"': c = '"'; break;
          case '\\': c = '\\'; break;
          default: fail(std::string("unsupported escape \\") + e);
        }
      }
      out += c;
    }
    if (pos_ >= s_.size()) fail("unterminated string");
    ++pos_;
    return out;
  }

  nlohmann::json array() {
    ++pos_;
    auto out = nlohmann::json::array();
    skip_space();
    if (pos_ < s_.size() && s_[pos_] == ']') {
      ++pos_;
      return out;
    }
    for (;;) {
      out.push_back(value());
      skip_space();
      if (pos_ >= s_.size()) fail("unterminated array");
      if (s_[pos_] == ',') {
        ++pos_;
        skip_space();
        if (pos_ < s_.size() && s_[pos_] == ']') {
          ++pos_;
          return out;
        }
        continue;
      }
      if (s_[pos_] == ']') {
        ++pos_;
        return out;
      }
      fail("expected ',' or ']' in array");
    }
  }

  nlohmann::json bare() {
    const auto start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ']' && s_[pos_] != ' ' &&
           s_[pos_] != '\t') {
      ++pos_;
    }
    std::string token(s_.substr(start, pos_ - start));
    if (token == "true") return true;
    if (token == "false") return false;
    std::string digits;
    for (char c : token) {
      if (c != '_') digits += c;
    }
    if (digits.empty()) fail("missing value");
    const bool integral = digits.find_first_of(".eE") == std::string::npos &&
                          digits != "inf" && digits != "nan";
    char* end = nullptr;
    if (integral) {
      errno = 0;
      const long long v = std::strtoll(digits.c_str(), &end, 10);
      if (*end == '\0' && errno == 0) return v;
    } else {
      const double v = std::strtod(digits.c_str(), &end);
      if (*end == '\0') return v;
    }
    fail("cannot parse value '" + token + "' (strings need double quotes)");
  }
};

inline nlohmann::json parse_value(std::string_view text) { return ValueParser(text).parse_all(); }

// Drops a trailing comment, leaving '#' inside strings alone.
inline std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\\' && quoted) {
      ++i;
    } else if (line[i] == '"') {
      quoted = !quoted;
    } else if (line[i] == '#' && !quoted) {
      return line.substr(0, i);
    }
  }
  return line;
}

inline bool valid_key(std::string_view k) {
  if (k.empty()) return false;
  for (char c : k) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  }
  return true;
}

// Returns {section: {key: value}}. `origin` prefixes error messages.
inline nlohmann::json parse(std::string_view text, const std::string& origin = "config") {
  nlohmann::json root = nlohmann::json::object();
  std::string section;
  std::vector<std::string> errors;
  std::size_t line_no = 0;
  for (const auto& raw : split_lines(text)) {
    ++line_no;
    const auto line = trim(strip_comment(raw));
    if (line.empty()) continue;
    const auto where = origin + ":" + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') {
        errors.push_back(where + "malformed section header");
        continue;
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!valid_key(section)) {
        errors.push_back(where + "invalid section name '" + section + "'");
      } else if (root.contains(section)) {
        errors.push_back(where + "duplicate section [" + section + "]");
      } else {
        root[section] = nlohmann::json::object();
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      errors.push_back(where + "expected 'key = value'");
      continue;
    }
    const std::string key(trim(line.substr(0, eq)));
    if (!valid_key(key)) {
      errors.push_back(where + "invalid key '" + key + "'");
      continue;
    }
    if (section.empty()) {
      errors.push_back(where + "key '" + key + "' outside any section");
      continue;
    }
    auto& table = root[section];
    if (table.contains(key)) {
      errors.push_back(where + "duplicate key '" + key + "'");
      continue;
    }
    try {
      table[key] = parse_value(line.substr(eq + 1));
    } catch (const ValidationError& e) {
      errors.push_back(where + e.what());
    }
  }
  if (!errors.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ValidationError(msg);
  }
  return root;
}

}  // namespace toml

// ---------------------------------------------------------------------------
// RunConfig
// ---------------------------------------------------------------------------

struct PathsConfig {
  // Strings as written in the config; resolved against base_dir on use.
  std::string corpus;
  std::string annotations;
  std::vector<std::string> stopwords;
  std::vector<std::string> gazetteers;
  std::string months;
  std::string lemmas;
  std::string output_dir = "out";
};

struct TextprepConfig {
  bool default_stopwords = true;
  bool porter = false;
  std::size_t min_token_length = 2;
  std::size_t min_df = 5;
  double max_df_ratio = 0.5;
};

struct LdaConfig {
  std::size_t topics = 17;
  std::size_t sweep_min = 10;
  std::size_t sweep_max = 25;
  std::optional<double> alpha;
  double beta = 0.01;
  std::size_t iterations = 1000;
  std::size_t burn_in = 200;
  std::uint64_t seed = 1;
  std::size_t top_words = 30;
  std::size_t coherence_top_n = 10;
};

struct GraphConfig {
  std::string dangling = "drop";
  bool accumulate = false;
};

struct LouvainConfig {
  std::vector<double> resolutions{1.0};
  std::uint64_t seed = 1;
  std::size_t restarts = 1;  // best Q over seeds seed, seed + 1, ...
};

struct TsneConfig {
  double perplexity = 30.0;
  std::size_t iterations = 1000;
  double learning_rate = 200.0;
  std::uint64_t seed = 1;
};

struct EvaluateConfig {
  std::string label = "eviction";
  std::optional<std::size_t> topic;
  double threshold = 0.4;
  std::vector<std::string> key_cases;
  double resolution = 1.0;
  bool weighted = true;
};

struct RunConfig {
  std::filesystem::path base_dir;
  PathsConfig paths;
  TextprepConfig textprep;
  LdaConfig lda;
  GraphConfig graph;
  LouvainConfig louvain;
  TsneConfig tsne;
  EvaluateConfig evaluate;

  std::filesystem::path resolve(const std::string& p) const {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  }
  std::filesystem::path output_dir() const { return resolve(paths.output_dir); }
};

namespace detail {

// Reads one section, recording type and domain violations.
class SectionReader {
 public:
  SectionReader(const nlohmann::json& root, std::string name, std::vector<std::string>& errors)
      : name_(std::move(name)), errors_(errors) {
    if (auto it = root.find(name_); it != root.end()) table_ = &*it;
  }

  ~SectionReader() {
    if (!table_) return;
    for (const auto& [key, value] : table_->items()) {
      if (!seen_.count(key)) errors_.push_back(name_ + "." + key + ": unknown key");
    }
  }

  void string(const char* key, std::string& out) {
    if (auto* v = get(key)) {
      if (v->is_string()) {
        out = v->get<std::string>();
      } else {
        bad(key, "expected a string");
      }
    }
  }

  void strings(const char* key, std::vector<std::string>& out) {
    if (auto* v = get(key)) {
      if (v->is_string()) {
        out = {v->get<std::string>()};
        return;
      }
      bool ok = v->is_array();
      if (ok) {
        for (const auto& e : *v) ok = ok && e.is_string();
      }
      if (!ok) {
        bad(key, "expected a string or an array of strings");
        return;
      }
      out = v->get<std::vector<std::string>>();
    }
  }

  void boolean(const char* key, bool& out) {
    if (auto* v = get(key)) {
      if (v->is_boolean()) {
        out = v->get<bool>();
      } else {
        bad(key, "expected true or false");
      }
    }
  }

  void count(const char* key, std::size_t& out, std::size_t min) {
    if (auto* v = get(key)) {
      if (!v->is_number_integer() || v->get<long long>() < static_cast<long long>(min)) {
        bad(key, "expected an integer >= " + std::to_string(min));
      } else {
        out = v->get<std::size_t>();
      }
    }
  }

  void optional_count(const char* key, std::optional<std::size_t>& out) {
    std::size_t value = 0;
    if (get(key)) {
      const auto before = errors_.size();
      count(key, value, 0);
      if (errors_.size() == before) out = value;
    }
  }

  void seed(const char* key, std::uint64_t& out) {
    if (auto* v = get(key)) {
      if (!v->is_number_integer() || v->get<long long>() < 0) {
        bad(key, "expected a non-negative integer");
      } else {
        out = v->get<std::uint64_t>();
      }
    }
  }

  void number(const char* key, double& out, const std::function<bool(double)>& ok,
              const std::string& domain) {
    if (auto* v = get(key)) {
      if (!v->is_number() || !ok(v->get<double>())) {
        bad(key, "expected a number " + domain);
      } else {
        out = v->get<double>();
      }
    }
  }

  void numbers(const char* key, std::vector<double>& out, const std::function<bool(double)>& ok,
               const std::string& domain) {
    if (auto* v = get(key)) {
      std::vector<double> values;
      bool good = v->is_array() && !v->empty();
      if (good) {
        for (const auto& e : *v) {
          good = good && e.is_number() && ok(e.get<double>());
          if (good) values.push_back(e.get<double>());
        }
      }
      if (!good) {
        bad(key, "expected a non-empty array of numbers " + domain);
      } else {
        out = std::move(values);
      }
    }
  }

  bool has(const char* key) const { return table_ && table_->contains(key); }
  void error(const std::string& key, const std::string& what) { bad(key, what); }

 private:
  std::string name_;
  std::vector<std::string>& errors_;
  const nlohmann::json* table_ = nullptr;
  std::set<std::string> seen_;

  const nlohmann::json* get(const char* key) {
    seen_.insert(key);
    if (!table_) return nullptr;
    auto it = table_->find(key);
    return it == table_->end() ? nullptr : &*it;
  }

  void bad(const std::string& key, const std::string& what) {
    errors_.push_back(name_ + "." + key + ": " + what);
  }
};

}  // namespace detail

inline const std::vector<std::string>& config_sections() {
  static const std::vector<std::string> names{"paths", "textprep", "lda",     "graph",
                                              "louvain", "tsne",   "evaluate"};
  return names;
}

// Builds and validates a RunConfig from parsed TOML. Relative paths are taken
// against `base_dir`, normally the config file's directory.
inline RunConfig run_config_from_json(const nlohmann::json& root,
                                      const std::filesystem::path& base_dir) {
  RunConfig cfg;
  cfg.base_dir = base_dir;
  std::vector<std::string> errors;
  for (const auto& [name, value] : root.items()) {
    const auto& known = config_sections();
    if (std::find(known.begin(), known.end(), name) == known.end()) {
      errors.push_back("[" + name + "]: unknown section");
    }
  }
  const auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
  {
    detail::SectionReader r(root, "paths", errors);
    auto& p = cfg.paths;
    r.string("corpus", p.corpus);
    r.string("annotations", p.annotations);
    r.strings("stopwords", p.stopwords);
    r.strings("gazetteers", p.gazetteers);
    r.string("months", p.months);
    r.string("lemmas", p.lemmas);
    r.string("output_dir", p.output_dir);
    auto must_exist = [&](const char* key, const std::string& value, bool required) {
      if (value.empty()) {
        if (required) r.error(key, "required path is not set");
        return;
      }
      if (!std::filesystem::exists(cfg.resolve(value))) {
        r.error(key, "file not found: " + cfg.resolve(value).string());
      }
    };
    must_exist("corpus", p.corpus, true);
    must_exist("annotations", p.annotations, true);
    for (const auto& s : p.stopwords) must_exist("stopwords", s, false);
    for (const auto& g : p.gazetteers) must_exist("gazetteers", g, false);
    must_exist("months", p.months, false);
    must_exist("lemmas", p.lemmas, false);
    if (p.output_dir.empty()) r.error("output_dir", "must not be empty");
  }
  {
    detail::SectionReader r(root, "textprep", errors);
    auto& t = cfg.textprep;
    r.boolean("default_stopwords", t.default_stopwords);
    r.boolean("porter", t.porter);
    r.count("min_token_length", t.min_token_length, 1);
    r.count("min_df", t.min_df, 1);
    r.number("max_df_ratio", t.max_df_ratio, [](double x) { return x > 0.0 && x <= 1.0; },
             "in (0, 1]");
  }
  {
    detail::SectionReader r(root, "lda", errors);
    auto& l = cfg.lda;
    r.count("topics", l.topics, 1);
    r.count("sweep_min", l.sweep_min, 1);
    r.count("sweep_max", l.sweep_max, 1);
    if (r.has("alpha")) {
      double a = 0.0;
      const auto before = errors.size();
      r.number("alpha", a, positive, "> 0");
      if (errors.size() == before) l.alpha = a;
    }
    r.number("beta", l.beta, positive, "> 0");
    r.count("iterations", l.iterations, 1);
    r.count("burn_in", l.burn_in, 0);
    r.seed("seed", l.seed);
    r.count("top_words", l.top_words, 1);
    r.count("coherence_top_n", l.coherence_top_n, 2);
    if (l.sweep_max < l.sweep_min) r.error("sweep_max", "must be >= sweep_min");
    if (l.iterations <= l.burn_in) r.error("iterations", "must exceed burn_in");
  }
  {
    detail::SectionReader r(root, "graph", errors);
    r.string("dangling", cfg.graph.dangling);
    r.boolean("accumulate", cfg.graph.accumulate);
    if (cfg.graph.dangling != "drop" && cfg.graph.dangling != "stub") {
      r.error("dangling", "expected \"drop\" or \"stub\"");
    }
  }
  {
    detail::SectionReader r(root, "louvain", errors);
    r.numbers("resolutions", cfg.louvain.resolutions, positive, "> 0");
    r.seed("seed", cfg.louvain.seed);
    r.count("restarts", cfg.louvain.restarts, 1);
    std::set<double> unique(cfg.louvain.resolutions.begin(), cfg.louvain.resolutions.end());
    if (unique.size() != cfg.louvain.resolutions.size()) {
      r.error("resolutions", "values must be distinct");
    }
  }
  {
    detail::SectionReader r(root, "tsne", errors);
    r.number("perplexity", cfg.tsne.perplexity, positive, "> 0");
    r.count("iterations", cfg.tsne.iterations, 1);
    r.number("learning_rate", cfg.tsne.learning_rate, positive, "> 0");
    r.seed("seed", cfg.tsne.seed);
  }
  {
    detail::SectionReader r(root, "evaluate", errors);
    auto& e = cfg.evaluate;
    r.string("label", e.label);
    r.optional_count("topic", e.topic);
    r.number("threshold", e.threshold, [](double x) { return x >= 0.0 && x <= 1.0; },
             "in [0, 1]");
    r.strings("key_cases", e.key_cases);
    r.number("resolution", e.resolution, positive, "> 0");
    r.boolean("weighted", e.weighted);
    if (e.label.empty()) r.error("label", "must not be empty");
    if (e.topic && *e.topic >= cfg.lda.topics) {
      r.error("topic", "must be below lda.topics (" + std::to_string(cfg.lda.topics) + ")");
    }
    const auto& rs = cfg.louvain.resolutions;
    if (std::find(rs.begin(), rs.end(), e.resolution) == rs.end()) {
      r.error("resolution", "must be one of louvain.resolutions");
    }
  }
  if (!errors.empty()) {
    std::string msg = "invalid configuration (" + std::to_string(errors.size()) + " problem" +
                      (errors.size() == 1 ? "" : "s") + "):";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ValidationError(msg);
  }
  return cfg;
}

// Applies `section.key=value` overrides; values use the TOML value syntax,
// and anything that does not parse is taken as a bare string.
inline void apply_overrides(nlohmann::json& root, const std::vector<std::string>& overrides) {
  std::vector<std::string> errors;
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    const auto dot = o.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
      errors.push_back("override '" + o + "': expected section.key=value");
      continue;
    }
    const std::string section(trim(std::string_view(o).substr(0, dot)));
    const std::string key(trim(std::string_view(o).substr(dot + 1, eq - dot - 1)));
    if (!toml::valid_key(section) || !toml::valid_key(key)) {
      errors.push_back("override '" + o + "': invalid section or key");
      continue;
    }
    const auto text = trim(std::string_view(o).substr(eq + 1));
    nlohmann::json value;
    try {
      value = toml::parse_value(text);
    } catch (const ValidationError&) {
      value = std::string(text);
    }
    root[section][key] = std::move(value);
  }
  if (!errors.empty()) {
    std::string msg = "invalid overrides:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ValidationError(msg);
  }
}

inline nlohmann::json to_json(const TextprepConfig& t) {
  return {{"default_stopwords", t.default_stopwords}, {"porter", t.porter},
          {"min_token_length", t.min_token_length}, {"min_df", t.min_df},
          {"max_df_ratio", t.max_df_ratio}};
}

inline nlohmann::json to_json(const LdaConfig& l) {
  return {{"topics", l.topics},
          {"sweep_min", l.sweep_min},
          {"sweep_max", l.sweep_max},
          {"alpha", l.alpha ? nlohmann::json(*l.alpha) : nlohmann::json(nullptr)},
          {"beta", l.beta},
          {"iterations", l.iterations},
          {"burn_in", l.burn_in},
          {"seed", l.seed},
          {"top_words", l.top_words},
          {"coherence_top_n", l.coherence_top_n}};
}

inline nlohmann::json to_json(const GraphConfig& g) {
  return {{"dangling", g.dangling}, {"accumulate", g.accumulate}};
}

inline nlohmann::json to_json(const LouvainConfig& l) {
  return {{"resolutions", l.resolutions}, {"seed", l.seed}, {"restarts", l.restarts}};
}

inline nlohmann::json to_json(const TsneConfig& t) {
  return {{"perplexity", t.perplexity}, {"iterations", t.iterations},
          {"learning_rate", t.learning_rate}, {"seed", t.seed}};
}

inline nlohmann::json to_json(const EvaluateConfig& e) {
  return {{"label", e.label},
          {"topic", e.topic ? nlohmann::json(*e.topic) : nlohmann::json(nullptr)},
          {"threshold", e.threshold},
          {"key_cases", e.key_cases},
          {"resolution", e.resolution},
          {"weighted", e.weighted}};
}

inline RunConfig load_run_config(const std::filesystem::path& path,
                                 const std::vector<std::string>& overrides = {}) {
  auto root = toml::parse(read_file(path), path.string());
  apply_overrides(root, overrides);
  auto base = path.parent_path();
  if (base.empty()) base = ".";
  return run_config_from_json(root, base);
}

}  // namespace lexcluster
