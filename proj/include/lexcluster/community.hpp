#pragma once

// Resolution-parameterized weighted modularity and Louvain optimization.
//
//   Q = sum_c [ W_in(c) / m  -  gamma * (S(c) / 2m)^2 ]
//
// m is the total edge weight, W_in(c) the weight of edges inside c (self-loops
// included, counted once) and S(c) the summed weighted degree of c, where a
// self-loop of weight w adds 2w to its node's degree.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"
#include "lexcluster/citegraph.hpp"
#include "lexcluster/util.hpp"

namespace lexcluster {

// Index-based weighted graph that admits self-loops. Louvain works on this;
// aggregation produces it.
struct WeightedGraph {
  // Neighbours other than the node itself, sorted by id.
  std::vector<std::vector<std::pair<std::uint32_t, double>>> adjacency;
  std::vector<double> self_loop;

  std::size_t size() const { return adjacency.size(); }

  double degree(std::uint32_t v) const {
    double k = 2.0 * self_loop[v];
    for (auto [u, w] : adjacency[v]) k += w;
    return k;
  }

  double total_weight() const {
    double half = 0.0;
    double loops = 0.0;
    for (std::uint32_t v = 0; v < size(); ++v) {
      loops += self_loop[v];
      for (auto [u, w] : adjacency[v]) half += w;
    }
    return loops + 0.5 * half;
  }

  static WeightedGraph from(const CitationGraph& g) {
    WeightedGraph out;
    out.adjacency.resize(g.num_nodes());
    out.self_loop.assign(g.num_nodes(), 0.0);
    for (const auto& e : g.edges()) {
      out.adjacency[e.u].emplace_back(e.v, e.weight);
      out.adjacency[e.v].emplace_back(e.u, e.weight);
    }
    for (auto& list : out.adjacency) std::sort(list.begin(), list.end());
    return out;
  }
};

struct CommunitySummary {
  std::size_t size = 0;
  double internal_weight = 0.0;
  double total_degree = 0.0;
};

class Partition {
 public:
  Partition() = default;

  // Canonicalizes the labels (community 0 holds the smallest case id, 1 the
  // next smallest, ...) and tallies per-community weights from `g`.
  Partition(const CitationGraph& g, const std::vector<std::uint32_t>& membership) {
    if (membership.size() != g.num_nodes()) {
      throw ValidationError("partition size differs from the graph's node count");
    }
    for (const auto& n : g.nodes()) ids_.push_back(n.case_id);
    canonicalize(membership);
    tally(WeightedGraph::from(g));
  }

  // Node ids and labels only; weight tallies stay zero.
  static Partition from_labels(std::vector<std::string> ids,
                               const std::vector<std::uint32_t>& membership) {
    if (ids.size() != membership.size()) throw ValidationError("ids and labels differ in length");
    Partition p;
    p.ids_ = std::move(ids);
    p.canonicalize(membership);
    return p;
  }

  std::size_t num_nodes() const { return ids_.size(); }
  std::size_t num_communities() const { return summaries_.size(); }
  const std::vector<std::string>& ids() const { return ids_; }
  const std::vector<std::uint32_t>& membership() const { return membership_; }
  std::uint32_t community_of(std::size_t node) const { return membership_.at(node); }
  const std::vector<CommunitySummary>& summaries() const { return summaries_; }

  std::vector<std::vector<std::string>> members() const {
    std::vector<std::vector<std::string>> out(num_communities());
    for (std::size_t i = 0; i < ids_.size(); ++i) out[membership_[i]].push_back(ids_[i]);
    return out;
  }

  bool operator==(const Partition& o) const {
    return ids_ == o.ids_ && membership_ == o.membership_;
  }

 private:
  std::vector<std::string> ids_;
  std::vector<std::uint32_t> membership_;
  std::vector<CommunitySummary> summaries_;

  void canonicalize(const std::vector<std::uint32_t>& raw) {
    std::map<std::uint32_t, std::string> smallest;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      auto [it, inserted] = smallest.emplace(raw[i], ids_[i]);
      if (!inserted) it->second = std::min(it->second, ids_[i]);
    }
    std::vector<std::pair<std::string, std::uint32_t>> order;
    for (const auto& [label, id] : smallest) order.emplace_back(id, label);
    std::sort(order.begin(), order.end());
    std::unordered_map<std::uint32_t, std::uint32_t> relabel;
    for (std::size_t c = 0; c < order.size(); ++c) {
      relabel[order[c].second] = static_cast<std::uint32_t>(c);
    }
    membership_.resize(raw.size());
    summaries_.assign(order.size(), {});
    for (std::size_t i = 0; i < raw.size(); ++i) {
      membership_[i] = relabel[raw[i]];
      ++summaries_[membership_[i]].size;
    }
  }

  void tally(const WeightedGraph& g) {
    for (std::uint32_t v = 0; v < g.size(); ++v) {
      auto& s = summaries_[membership_[v]];
      s.total_degree += g.degree(v);
      s.internal_weight += g.self_loop[v];
      for (auto [u, w] : g.adjacency[v]) {
        if (u > v && membership_[u] == membership_[v]) s.internal_weight += w;
      }
    }
  }
};

inline double modularity(const WeightedGraph& g, const std::vector<std::uint32_t>& membership,
                         double resolution) {
  if (membership.size() != g.size()) throw ValidationError("partition does not cover the graph");
  if (!(resolution > 0.0)) throw ValidationError("resolution must be positive");
  const double m = g.total_weight();
  if (!(m > 0.0)) throw ValidationError("modularity undefined: total edge weight is zero");
  std::uint32_t count = 0;
  for (auto c : membership) count = std::max(count, c + 1);
  std::vector<double> inside(count, 0.0), degree(count, 0.0);
  for (std::uint32_t v = 0; v < g.size(); ++v) {
    const auto c = membership[v];
    degree[c] += g.degree(v);
    inside[c] += g.self_loop[v];
    for (auto [u, w] : g.adjacency[v]) {
      if (u > v && membership[u] == c) inside[c] += w;
    }
  }
  double q = 0.0;
  for (std::uint32_t c = 0; c < count; ++c) {
    const double share = degree[c] / (2.0 * m);
    q += inside[c] / m - resolution * share * share;
  }
  return q;
}

// Partition entries are matched to graph nodes by case id.
inline double modularity(const CitationGraph& g, const Partition& p, double resolution) {
  if (p.num_nodes() != g.num_nodes()) {
    throw ValidationError("partition covers " + std::to_string(p.num_nodes()) +
                          " nodes but the graph has " + std::to_string(g.num_nodes()));
  }
  std::vector<std::uint32_t> membership(g.num_nodes());
  std::vector<bool> seen(g.num_nodes(), false);
  for (std::size_t i = 0; i < p.num_nodes(); ++i) {
    auto v = g.find(p.ids()[i]);
    if (!v || seen[*v]) throw ValidationError("partition node " + p.ids()[i] + " not in graph");
    seen[*v] = true;
    membership[*v] = p.community_of(i);
  }
  return modularity(WeightedGraph::from(g), membership, resolution);
}

// Collapses each community into one node. Labels must be dense (0..C-1).
// Internal weight becomes a self-loop; cross weights are summed.
inline WeightedGraph aggregate(const WeightedGraph& g, const std::vector<std::uint32_t>& membership) {
  if (membership.size() != g.size()) throw ValidationError("partition does not cover the graph");
  std::uint32_t count = 0;
  for (auto c : membership) count = std::max(count, c + 1);
  WeightedGraph out;
  out.adjacency.resize(count);
  out.self_loop.assign(count, 0.0);
  std::vector<std::map<std::uint32_t, double>> cross(count);
  for (std::uint32_t v = 0; v < g.size(); ++v) {
    const auto cv = membership[v];
    out.self_loop[cv] += g.self_loop[v];
    for (auto [u, w] : g.adjacency[v]) {
      if (u < v) continue;
      const auto cu = membership[u];
      if (cu == cv) {
        out.self_loop[cv] += w;
      } else {
        cross[cv][cu] += w;
        cross[cu][cv] += w;
      }
    }
  }
  for (std::uint32_t c = 0; c < count; ++c) {
    out.adjacency[c].assign(cross[c].begin(), cross[c].end());
  }
  return out;
}

inline WeightedGraph aggregate(const CitationGraph& g, const Partition& p) {
  std::vector<std::uint32_t> membership(g.num_nodes());
  for (std::size_t i = 0; i < p.num_nodes(); ++i) {
    auto v = g.find(p.ids()[i]);
    if (!v) throw ValidationError("partition node " + p.ids()[i] + " not in graph");
    membership[*v] = p.community_of(i);
  }
  return aggregate(WeightedGraph::from(g), membership);
}

struct LouvainResult {
  Partition partition;
  double modularity = 0.0;          // recomputed on the final partition
  double tracked_modularity = 0.0;  // accumulated from accepted move gains
  std::size_t levels = 0;
  std::size_t moves = 0;
};

namespace detail {

// Local-move phase on one level. Returns the number of accepted moves and
// adds their gains (in modularity units) to `tracked`.
inline std::size_t louvain_local_moves(const WeightedGraph& g, std::vector<std::uint32_t>& comm,
                                       double resolution, double m, Rng& rng, double& tracked) {
  const auto n = static_cast<std::uint32_t>(g.size());
  std::vector<double> degree(n), tot(n, 0.0);
  for (std::uint32_t v = 0; v < n; ++v) {
    degree[v] = g.degree(v);
    tot[comm[v]] += degree[v];
  }
  std::vector<double> link(n, 0.0);
  std::vector<std::uint32_t> touched;
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  const double two_m = 2.0 * m;
  constexpr double kMinGain = 1e-12;

  std::size_t total_moves = 0;
  while (true) {
    rng.shuffle(order);
    std::size_t moves = 0;
    for (const auto v : order) {
      const auto own = comm[v];
      const double kv = degree[v];
      for (auto [u, w] : g.adjacency[v]) {
        const auto c = comm[u];
        if (link[c] == 0.0) touched.push_back(c);
        link[c] += w;
      }
      tot[own] -= kv;
      // m * (gain of inserting v into c), v already removed from `own`.
      auto gain = [&](std::uint32_t c) { return link[c] - resolution * tot[c] * kv / two_m; };
      const double own_gain = gain(own);
      std::sort(touched.begin(), touched.end());
      std::uint32_t best = own;
      double best_gain = 0.0;
      bool have_candidate = false;
      for (auto c : touched) {
        if (c == own) continue;
        const double gc = gain(c);
        if (!have_candidate || gc > best_gain) {
          best = c;
          best_gain = gc;
          have_candidate = true;
        }
      }
      if (have_candidate && (best_gain - own_gain) / m > kMinGain) {
        tracked += (best_gain - own_gain) / m;
        comm[v] = best;
        ++moves;
      } else {
        best = own;
      }
      tot[best] += kv;
      for (auto c : touched) link[c] = 0.0;
      touched.clear();
    }
    total_moves += moves;
    if (moves == 0) break;
  }
  return total_moves;
}

// Relabels to 0..C-1 in order of first appearance.
inline std::uint32_t densify(std::vector<std::uint32_t>& comm) {
  std::unordered_map<std::uint32_t, std::uint32_t> relabel;
  for (auto& c : comm) {
    auto [it, inserted] = relabel.emplace(c, static_cast<std::uint32_t>(relabel.size()));
    c = it->second;
  }
  return static_cast<std::uint32_t>(relabel.size());
}

}  // namespace detail

// Louvain on an index graph; returns dense raw labels per node.
inline std::vector<std::uint32_t> louvain_membership(const WeightedGraph& graph, double resolution,
                                                     std::uint64_t seed, LouvainResult* stats = nullptr) {
  if (!(resolution > 0.0)) throw ValidationError("resolution must be positive");
  const double m = graph.total_weight();
  if (!(m > 0.0)) throw ValidationError("Louvain: total edge weight is zero");

  Rng rng(seed);
  std::vector<std::uint32_t> flat(graph.size());
  std::iota(flat.begin(), flat.end(), 0u);
  double tracked = modularity(graph, flat, resolution);
  WeightedGraph level = graph;
  std::size_t levels = 0, moves = 0;
  while (true) {
    std::vector<std::uint32_t> comm(level.size());
    std::iota(comm.begin(), comm.end(), 0u);
    const auto moved = detail::louvain_local_moves(level, comm, resolution, m, rng, tracked);
    ++levels;
    moves += moved;
    if (moved == 0) break;
    detail::densify(comm);
    for (auto& c : flat) c = comm[c];
    level = aggregate(level, comm);
  }
  if (stats) {
    stats->tracked_modularity = tracked;
    stats->levels = levels;
    stats->moves = moves;
  }
  return flat;
}

inline LouvainResult louvain(const CitationGraph& g, double resolution, std::uint64_t seed) {
  LouvainResult result;
  const auto wg = WeightedGraph::from(g);
  const auto flat = louvain_membership(wg, resolution, seed, &result);
  result.partition = Partition(g, flat);
  result.modularity = modularity(wg, result.partition.membership(), resolution);
  return result;
}

// ---------------------------------------------------------------------------
// Export
// ---------------------------------------------------------------------------

inline std::string export_partition_csv(const Partition& p) {
  std::string out = "case_id,community_id\n";
  for (std::size_t i = 0; i < p.num_nodes(); ++i) {
    out += csv::join({p.ids()[i], std::to_string(p.community_of(i))});
    out += '\n';
  }
  return out;
}

inline Partition import_partition_csv(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty() || trim(lines[0]) != "case_id,community_id") {
    throw ValidationError("partition CSV must start with header 'case_id,community_id'");
  }
  std::vector<std::string> ids;
  std::vector<std::uint32_t> labels;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const auto f = csv::parse_line(lines[i]);
    if (f.size() != 2) throw ValidationError("partition CSV line " + std::to_string(i + 1) + ": expected 2 fields");
    ids.push_back(f[0]);
    labels.push_back(static_cast<std::uint32_t>(std::stoul(f[1])));
  }
  return Partition::from_labels(std::move(ids), labels);
}

inline nlohmann::json partition_summary(const Partition& p, double q, double resolution,
                                        std::uint64_t seed) {
  nlohmann::json sizes = nlohmann::json::array();
  nlohmann::json communities = nlohmann::json::array();
  for (std::size_t c = 0; c < p.num_communities(); ++c) {
    const auto& s = p.summaries()[c];
    sizes.push_back(s.size);
    communities.push_back({{"id", c},
                           {"size", s.size},
                           {"internal_weight", s.internal_weight},
                           {"total_degree", s.total_degree}});
  }
  return {{"C", p.num_communities()}, {"Q", q},           {"resolution", resolution},
          {"seed", seed},             {"sizes", sizes}, {"communities", communities}};
}

}  // namespace lexcluster
