#pragma once

// Undirected citation network over case ids, connected-component census and
// topic-similarity edge weighting.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"
#include "lexcluster/corpus.hpp"
#include "lexcluster/csv.hpp"
#include "lexcluster/util.hpp"

namespace lexcluster {

using NodeId = std::uint32_t;

struct NodeInfo {
  std::string case_id;
  std::optional<Language> language;  // unset for stub nodes
  std::optional<DocType> doc_type;
  bool has_topic_vector = false;
  bool stub = false;

  bool operator==(const NodeInfo&) const = default;
};

struct Edge {
  NodeId u = 0;  // u < v
  NodeId v = 0;
  double weight = 1.0;

  bool operator==(const Edge&) const = default;
};

class CitationGraph {
 public:
  NodeId add_node(NodeInfo info) {
    if (info.case_id.empty()) throw ValidationError("graph node with empty case_id");
    auto [it, inserted] = index_.emplace(info.case_id, static_cast<NodeId>(nodes_.size()));
    if (!inserted) throw ValidationError("duplicate graph node " + info.case_id);
    nodes_.push_back(std::move(info));
    adjacency_.emplace_back();
    return it->second;
  }

  // Adds an undirected edge. Self-loops are rejected. An existing edge is left
  // alone unless `accumulate` is set, in which case the weight is added.
  // Returns true when a new edge was created.
  bool add_edge(NodeId a, NodeId b, double weight = 1.0, bool accumulate = false) {
    if (a >= nodes_.size() || b >= nodes_.size()) throw ValidationError("edge endpoint out of range");
    if (a == b) throw ValidationError("self-loop on " + nodes_[a].case_id);
    if (!(weight >= 0.0) || !std::isfinite(weight)) {
      throw ValidationError("edge weight must be finite and non-negative");
    }
    const auto key = edge_key(a, b);
    if (auto it = edge_index_.find(key); it != edge_index_.end()) {
      if (accumulate) edges_[it->second].weight += weight;
      return false;
    }
    const auto e = static_cast<std::uint32_t>(edges_.size());
    edges_.push_back({std::min(a, b), std::max(a, b), weight});
    edge_index_.emplace(key, e);
    adjacency_[a].emplace_back(b, e);
    adjacency_[b].emplace_back(a, e);
    return true;
  }

  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<NodeInfo>& nodes() const { return nodes_; }
  const NodeInfo& node(NodeId n) const { return nodes_.at(n); }
  NodeInfo& node(NodeId n) { return nodes_.at(n); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(std::size_t e) const { return edges_.at(e); }
  void set_weight(std::size_t e, double w) { edges_.at(e).weight = w; }

  // (neighbour, edge index) pairs.
  std::span<const std::pair<NodeId, std::uint32_t>> neighbors(NodeId n) const {
    return adjacency_.at(n);
  }

  std::optional<NodeId> find(std::string_view case_id) const {
    auto it = index_.find(std::string(case_id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<std::size_t> find_edge(NodeId a, NodeId b) const {
    auto it = edge_index_.find(edge_key(a, b));
    if (it == edge_index_.end()) return std::nullopt;
    return it->second;
  }

  double total_weight() const {
    double m = 0.0;
    for (const auto& e : edges_) m += e.weight;
    return m;
  }

  double weighted_degree(NodeId n) const {
    double k = 0.0;
    for (auto [nb, e] : adjacency_.at(n)) k += edges_[e].weight;
    return k;
  }

  // Checks the adjacency index against the edge list; throws Error on mismatch.
  void validate() const {
    std::size_t half_edges = 0;
    for (NodeId n = 0; n < nodes_.size(); ++n) {
      for (auto [nb, e] : adjacency_[n]) {
        const auto& edge = edges_.at(e);
        if (!((edge.u == n && edge.v == nb) || (edge.v == n && edge.u == nb))) {
          throw Error("adjacency of " + nodes_[n].case_id + " disagrees with edge list");
        }
        ++half_edges;
      }
    }
    if (half_edges != 2 * edges_.size()) throw Error("adjacency size disagrees with edge list");
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      const auto& edge = edges_[e];
      if (edge.u >= edge.v) throw Error("edge endpoints must satisfy u < v");
      if (!(edge.weight >= 0.0)) throw Error("negative edge weight");
      auto it = edge_index_.find(edge_key(edge.u, edge.v));
      if (it == edge_index_.end() || it->second != e) throw Error("edge index out of sync");
    }
  }

  bool operator==(const CitationGraph& other) const {
    return nodes_ == other.nodes_ && edges_ == other.edges_;
  }

 private:
  static std::uint64_t edge_key(NodeId a, NodeId b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
  }

  std::vector<NodeInfo> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::pair<NodeId, std::uint32_t>>> adjacency_;
  std::unordered_map<std::string, NodeId> index_;
  std::unordered_map<std::uint64_t, std::uint32_t> edge_index_;
};

enum class DanglingPolicy { drop, stub };

struct GraphBuildSummary {
  std::size_t dropped_citations = 0;  // targets outside the corpus (drop policy)
  std::size_t stub_nodes = 0;
  std::size_t self_loops = 0;
  std::size_t duplicates_collapsed = 0;
};

struct GraphBuildResult {
  CitationGraph graph;
  GraphBuildSummary summary;
};

inline GraphBuildResult build_graph(const Corpus& corpus,
                                    DanglingPolicy dangling = DanglingPolicy::drop,
                                    bool accumulate_multiplicity = false) {
  GraphBuildResult result;
  auto& g = result.graph;
  auto& s = result.summary;
  for (const auto& doc : corpus) {
    g.add_node({doc.case_id, doc.language, doc.doc_type, false, false});
  }
  for (const auto& doc : corpus) {
    const NodeId src = *g.find(doc.case_id);
    for (const auto& target : doc.cited_case_ids) {
      if (target == doc.case_id) {
        ++s.self_loops;
        continue;
      }
      auto dst = g.find(target);
      if (!dst) {
        if (dangling == DanglingPolicy::drop) {
          ++s.dropped_citations;
          continue;
        }
        dst = g.add_node({target, std::nullopt, std::nullopt, false, true});
        ++s.stub_nodes;
      }
      if (!g.add_edge(src, *dst, 1.0, accumulate_multiplicity)) ++s.duplicates_collapsed;
    }
  }
  return result;
}

// Components are numbered by size (largest first), ties broken by the
// smallest case id they contain, so component 0 is the giant component.
struct ComponentCensus {
  std::vector<std::uint32_t> component_of;  // per node
  std::vector<std::size_t> sizes;           // descending
  std::optional<std::uint32_t> giant;

  std::size_t count() const { return sizes.size(); }
  std::size_t singletons() const {
    return static_cast<std::size_t>(std::count(sizes.begin(), sizes.end(), std::size_t{1}));
  }
};

inline ComponentCensus components(const CitationGraph& g) {
  const auto n = g.num_nodes();
  std::vector<std::int64_t> raw(n, -1);
  struct Info {
    std::size_t size = 0;
    std::string min_id;
  };
  std::vector<Info> infos;
  std::vector<NodeId> stack;
  for (NodeId start = 0; start < n; ++start) {
    if (raw[start] >= 0) continue;
    const auto label = static_cast<std::int64_t>(infos.size());
    Info info{0, g.node(start).case_id};
    raw[start] = label;
    stack.push_back(start);
    while (!stack.empty()) {
      const NodeId cur = stack.back();
      stack.pop_back();
      ++info.size;
      info.min_id = std::min(info.min_id, g.node(cur).case_id);
      for (auto [nb, e] : g.neighbors(cur)) {
        if (raw[nb] < 0) {
          raw[nb] = label;
          stack.push_back(nb);
        }
      }
    }
    infos.push_back(std::move(info));
  }
  std::vector<std::size_t> order(infos.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (infos[a].size != infos[b].size) return infos[a].size > infos[b].size;
    return infos[a].min_id < infos[b].min_id;
  });
  std::vector<std::uint32_t> relabel(infos.size());
  ComponentCensus census;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    relabel[order[rank]] = static_cast<std::uint32_t>(rank);
    census.sizes.push_back(infos[order[rank]].size);
  }
  census.component_of.resize(n);
  for (NodeId v = 0; v < n; ++v) census.component_of[v] = relabel[static_cast<std::size_t>(raw[v])];
  if (!infos.empty()) census.giant = 0;
  return census;
}

// Induced subgraph on the given nodes, keeping their relative order.
inline CitationGraph induced_subgraph(const CitationGraph& g, const std::vector<bool>& keep) {
  CitationGraph out;
  std::vector<std::int64_t> remap(g.num_nodes(), -1);
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    if (keep[v]) remap[v] = out.add_node(g.node(v));
  }
  for (const auto& e : g.edges()) {
    if (remap[e.u] >= 0 && remap[e.v] >= 0) {
      out.add_edge(static_cast<NodeId>(remap[e.u]), static_cast<NodeId>(remap[e.v]), e.weight);
    }
  }
  return out;
}

inline CitationGraph subgraph(const CitationGraph& g, const ComponentCensus& census,
                              std::uint32_t component) {
  if (component >= census.count()) {
    throw ValidationError("unknown component id " + std::to_string(component));
  }
  std::vector<bool> keep(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) keep[v] = census.component_of[v] == component;
  return induced_subgraph(g, keep);
}

inline double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw ValidationError("cosine: vectors differ in length");
  double dot = 0.0, nu = 0.0, nv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0.0 || nv == 0.0) throw ValidationError("cosine: zero vector");
  const double c = dot / (std::sqrt(nu) * std::sqrt(nv));
  return std::clamp(c, -1.0, 1.0);
}

// Mean of the two central values for an even count.
inline double median(std::vector<double> values) {
  if (values.empty()) throw ValidationError("median of an empty list");
  std::sort(values.begin(), values.end());
  const auto n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

using ThetaMap = std::map<std::string, std::vector<double>>;

struct WeightingResult {
  CitationGraph graph;
  double fallback_weight = 0.0;  // median cosine over fully vectored edges
  std::size_t vectored_edges = 0;
  std::size_t fallback_edges = 0;
};

// Pass 1 weights every edge whose endpoints both have topic vectors by their
// cosine similarity; pass 2 gives all remaining edges the median of pass 1.
inline WeightingResult weight_edges(const CitationGraph& g, const ThetaMap& thetas) {
  std::vector<std::string> missing;
  std::vector<const std::vector<double>*> vec(g.num_nodes(), nullptr);
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    const auto& info = g.node(v);
    auto it = thetas.find(info.case_id);
    if (it != thetas.end()) {
      vec[v] = &it->second;
    } else if (info.language == Language::en) {
      missing.push_back(info.case_id);
    }
  }
  if (!missing.empty()) {
    std::string list;
    for (std::size_t i = 0; i < missing.size() && i < 20; ++i) {
      list += (i ? ", " : "") + missing[i];
    }
    if (missing.size() > 20) list += ", ...";
    throw ValidationError(std::to_string(missing.size()) +
                          " English node(s) lack a topic vector: " + list);
  }

  WeightingResult result;
  result.graph = g;
  auto& out = result.graph;
  for (NodeId v = 0; v < out.num_nodes(); ++v) out.node(v).has_topic_vector = vec[v] != nullptr;

  std::vector<double> cosines;
  std::vector<bool> vectored(g.num_edges(), false);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const auto& edge = g.edge(e);
    if (vec[edge.u] && vec[edge.v]) {
      const double c = cosine(*vec[edge.u], *vec[edge.v]);
      out.set_weight(e, c);
      cosines.push_back(c);
      vectored[e] = true;
    }
  }
  if (cosines.empty()) {
    throw ValidationError("no edge joins two topic-modelled nodes; fallback median undefined");
  }
  result.fallback_weight = median(cosines);
  result.vectored_edges = cosines.size();
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    if (!vectored[e]) {
      out.set_weight(e, result.fallback_weight);
      ++result.fallback_edges;
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// CSV import / export
// ---------------------------------------------------------------------------

inline std::string export_edges_csv(const CitationGraph& g) {
  std::string out = "src,dst,weight\n";
  for (const auto& e : g.edges()) {
    out += csv::join({g.node(e.u).case_id, g.node(e.v).case_id, format_double(e.weight)});
    out += '\n';
  }
  return out;
}

inline std::string export_nodes_csv(const CitationGraph& g) {
  std::string out = "case_id,language,doc_type,has_topic_vector,stub\n";
  for (const auto& n : g.nodes()) {
    out += csv::join({n.case_id, n.language ? std::string(to_string(*n.language)) : "",
                      n.doc_type ? std::string(to_string(*n.doc_type)) : "",
                      n.has_topic_vector ? "1" : "0", n.stub ? "1" : "0"});
    out += '\n';
  }
  return out;
}

// Nodes CSV may be empty, in which case nodes are created from the edge list.
inline CitationGraph import_graph_csv(std::string_view nodes_csv, std::string_view edges_csv) {
  CitationGraph g;
  const auto node_lines = split_lines(nodes_csv);
  for (std::size_t i = 1; i < node_lines.size(); ++i) {
    if (trim(node_lines[i]).empty()) continue;
    const auto f = csv::parse_line(node_lines[i]);
    if (f.size() < 5) throw ValidationError("nodes CSV line " + std::to_string(i + 1) + ": expected 5 fields");
    NodeInfo info;
    info.case_id = f[0];
    if (!f[1].empty()) {
      info.language = parse_language(f[1]);
      if (!info.language) throw ValidationError("nodes CSV: unknown language '" + f[1] + "'");
    }
    if (!f[2].empty()) {
      info.doc_type = parse_doc_type(f[2]);
      if (!info.doc_type) throw ValidationError("nodes CSV: unknown doc_type '" + f[2] + "'");
    }
    info.has_topic_vector = f[3] == "1";
    info.stub = f[4] == "1";
    g.add_node(std::move(info));
  }
  const auto edge_lines = split_lines(edges_csv);
  if (edge_lines.empty() || trim(edge_lines[0]) != "src,dst,weight") {
    throw ValidationError("edges CSV must start with header 'src,dst,weight'");
  }
  for (std::size_t i = 1; i < edge_lines.size(); ++i) {
    if (trim(edge_lines[i]).empty()) continue;
    const auto f = csv::parse_line(edge_lines[i]);
    if (f.size() != 3) throw ValidationError("edges CSV line " + std::to_string(i + 1) + ": expected 3 fields");
    auto endpoint = [&](const std::string& id) {
      if (auto n = g.find(id)) return *n;
      return g.add_node({id, std::nullopt, std::nullopt, false, false});
    };
    const NodeId a = endpoint(f[0]);
    const NodeId b = endpoint(f[1]);
    char* end = nullptr;
    const double w = std::strtod(f[2].c_str(), &end);
    if (end == f[2].c_str() || *end != '\0') {
      throw ValidationError("edges CSV line " + std::to_string(i + 1) + ": bad weight '" + f[2] + "'");
    }
    if (a == b) throw ValidationError("edges CSV line " + std::to_string(i + 1) + ": self-loop");
    g.add_edge(a, b, w);
  }
  return g;
}

inline nlohmann::json to_json(const ComponentCensus& c, const CitationGraph& g) {
  nlohmann::json j;
  j["nodes"] = g.num_nodes();
  j["edges"] = g.num_edges();
  j["components"] = c.count();
  j["singletons"] = c.singletons();
  j["sizes"] = c.sizes;
  if (c.giant) {
    std::size_t giant_edges = 0;
    for (const auto& e : g.edges()) giant_edges += c.component_of[e.u] == *c.giant;
    j["giant"] = {{"id", *c.giant}, {"nodes", c.sizes[*c.giant]}, {"edges", giant_edges}};
  } else {
    j["giant"] = nullptr;
  }
  return j;
}

}  // namespace lexcluster
