#include "bfq/psm_graphs.hpp"

#include <algorithm>
#include <numeric>

#include <nlohmann/json.hpp>

namespace bfq {

using nlohmann::json;

int PsmGraph::edge_count() const {
  int e = 0;
  for (auto& [k, m] : edges) {
    (void)k;
    e += m;
  }
  return e;
}

int PsmGraph::loop_count() const { return edge_count() - vertex_count() + 1; }

int PsmGraph::out_degree(int v) const {
  int d = 0;
  for (auto& [k, m] : edges)
    if (k.first == v) d += m;
  return d;
}

int PsmGraph::in_degree(int v) const {
  int d = 0;
  for (auto& [k, m] : edges)
    if (k.second == v) d += m;
  return d;
}

bool PsmGraph::connected() const {
  int n = vertex_count();
  if (n == 0) return false;
  std::vector<int> comp(n, -1);
  std::vector<int> stack = {0};
  comp[0] = 0;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (auto& [k, m] : edges) {
      (void)m;
      int w = -1;
      if (k.first == v) w = k.second;
      else if (k.second == v) w = k.first;
      if (w >= 0 && comp[w] < 0) {
        comp[w] = 0;
        stack.push_back(w);
      }
    }
  }
  for (int v = 0; v < n; ++v)
    if (comp[v] < 0) return false;
  return true;
}

namespace {

std::string encode(const PsmGraph& g) {
  std::string s;
  for (auto& [k, m] : g.edges)
    s += "(" + std::to_string(k.first) + "," + std::to_string(k.second) + "):" + std::to_string(m) + ";";
  s += "a:";
  for (int x : g.a_leaves) s += std::to_string(x) + ",";
  s += "b:";
  for (int x : g.b_leaves) s += std::to_string(x) + ",";
  return s;
}

PsmGraph permuted(const PsmGraph& g, const std::vector<int>& perm) {
  PsmGraph r = g;
  r.edges.clear();
  for (auto& [k, m] : g.edges) r.edges[{perm[k.first], perm[k.second]}] += m;
  for (int v = 0; v < g.vertex_count(); ++v) {
    r.a_leaves[perm[v]] = g.a_leaves[v];
    r.b_leaves[perm[v]] = g.b_leaves[v];
  }
  return r;
}

// All permutations acting within the three vertex classes.
void for_each_class_perm(const PsmGraph& g, const std::function<void(const std::vector<int>&)>& fn) {
  int j = g.in_count, k = g.out_count, l = g.internal_count;
  std::vector<int> pj(j), pk(k), pl(l);
  std::iota(pj.begin(), pj.end(), 0);
  std::iota(pk.begin(), pk.end(), 0);
  std::iota(pl.begin(), pl.end(), 0);
  std::vector<int> perm(g.vertex_count());
  do {
    do {
      do {
        for (int i = 0; i < j; ++i) perm[i] = pj[i];
        for (int i = 0; i < k; ++i) perm[j + i] = j + pk[i];
        for (int i = 0; i < l; ++i) perm[j + k + i] = j + k + pl[i];
        fn(perm);
      } while (std::next_permutation(pl.begin(), pl.end()));
    } while (std::next_permutation(pk.begin(), pk.end()));
  } while (std::next_permutation(pj.begin(), pj.end()));
}

}  // namespace

std::string PsmGraph::canonical_key() const {
  std::string best;
  for_each_class_perm(*this, [&](const std::vector<int>& perm) {
    std::string s = encode(permuted(*this, perm));
    if (best.empty() || s < best) best = s;
  });
  return best;
}

long long PsmGraph::automorphism_count() const {
  std::string self = encode(*this);
  long long fixing = 0;
  for_each_class_perm(*this, [&](const std::vector<int>& perm) {
    if (encode(permuted(*this, perm)) == self) ++fixing;
  });
  long long aut = fixing;
  auto fact = [](int n) {
    long long f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  };
  for (auto& [k, m] : edges) {
    (void)k;
    aut *= fact(m);
  }
  for (int v = 0; v < vertex_count(); ++v) aut *= fact(a_leaves[v]) * fact(b_leaves[v]);
  return aut;
}

void PsmGraph::validate(int max_valence) const {
  if (static_cast<int>(a_leaves.size()) != vertex_count() ||
      static_cast<int>(b_leaves.size()) != vertex_count())
    throw Error(ErrorCode::Invalid, "leaf vectors must cover every vertex");
  for (auto& [k, m] : edges) {
    if (m <= 0) throw Error(ErrorCode::Invalid, "edge multiplicities must be positive");
    if (k.first == k.second) throw Error(ErrorCode::Invalid, "short loops are not admissible");
    if (k.first < 0 || k.second < 0 || k.first >= vertex_count() || k.second >= vertex_count())
      throw Error(ErrorCode::Invalid, "edge endpoint out of range");
    if (is_out(k.first) || is_in(k.second))
      throw Error(ErrorCode::Invalid, "edge direction violates the vertex roles");
  }
  for (int v = 0; v < vertex_count(); ++v) {
    if (a_leaves[v] < 0 || b_leaves[v] < 0) throw Error(ErrorCode::Invalid, "negative leaf count");
    if (is_in(v)) {
      if (out_degree(v) + a_leaves[v] != 1 || in_degree(v) != 0 || b_leaves[v] != 0)
        throw Error(ErrorCode::Invalid, "in-vertex must emit exactly one half-edge");
    } else if (is_out(v)) {
      if (in_degree(v) + b_leaves[v] != 1 || out_degree(v) != 0 || a_leaves[v] != 0)
        throw Error(ErrorCode::Invalid, "out-vertex must absorb exactly one half-edge");
    } else {
      if (out_degree(v) + a_leaves[v] != 2)
        throw Error(ErrorCode::Invalid, "internal vertex must emit exactly two half-edges");
      if (in_degree(v) + b_leaves[v] > max_valence)
        throw Error(ErrorCode::BoundsTooLarge, "internal vertex exceeds the incoming valence cap");
    }
  }
  if (!connected()) throw Error(ErrorCode::Invalid, "graph must be connected");
}

std::vector<PsmGraph> enumerate_labeled_graphs(int j, int k, int l, const EnumerationBounds& bounds) {
  if (j < 0 || k < 0 || l < 0) throw Error(ErrorCode::Invalid, "negative vertex counts");
  if (j + k + l > bounds.max_total_vertices)
    throw Error(ErrorCode::BoundsTooLarge, "vertex count exceeds the enumeration cap");
  std::vector<PsmGraph> out;
  int n = j + k + l;
  if (n == 0) return out;
  PsmGraph base;
  base.in_count = j;
  base.out_count = k;
  base.internal_count = l;
  base.a_leaves.assign(n, 0);
  base.b_leaves.assign(n, 0);

  // Targets for an outgoing half-edge from v: out- and internal vertices, not v.
  auto targets = [&](int v) {
    std::vector<int> t = {-1};  // -1 = a-leaf
    for (int w = j; w < n; ++w)
      if (w != v) t.push_back(w);
    return t;
  };

  // Slot choices: one per in-vertex, an unordered pair per internal vertex.
  struct Slot {
    int vertex;
    bool pair;
  };
  std::vector<Slot> slots;
  for (int v = 0; v < j; ++v) slots.push_back({v, false});
  for (int v = j + k; v < n; ++v) slots.push_back({v, true});

  std::function<void(std::size_t, PsmGraph&)> rec = [&](std::size_t si, PsmGraph& g) {
    if (si == slots.size()) {
      // Out-vertices: at most one incoming; missing ones become b-leaves.
      for (int v = j; v < j + k; ++v) {
        int d = g.in_degree(v);
        if (d > 1) return;
        g.b_leaves[v] = 1 - d;
      }
      for (int v = j + k; v < n; ++v)
        if (g.in_degree(v) > bounds.max_incoming) return;
      if (!g.connected()) return;
      // Internal b-leaves: all distributions within the caps.
      std::vector<int> room;
      for (int v = j + k; v < n; ++v) room.push_back(bounds.max_incoming - g.in_degree(v));
      int base_leaves = 0;
      for (int v = 0; v < n; ++v) base_leaves += g.a_leaves[v] + g.b_leaves[v];
      std::function<void(std::size_t, int)> leaves = [&](std::size_t vi, int used) {
        if (vi == room.size()) {
          PsmGraph done = g;
          out.push_back(done);
          return;
        }
        for (int b = 0; b <= room[vi] && base_leaves + used + b <= bounds.max_leaves; ++b) {
          g.b_leaves[j + k + static_cast<int>(vi)] = b;
          leaves(vi + 1, used + b);
        }
        g.b_leaves[j + k + static_cast<int>(vi)] = 0;
      };
      if (base_leaves > bounds.max_leaves) return;
      leaves(0, 0);
      return;
    }
    const Slot& s = slots[si];
    auto ts = targets(s.vertex);
    if (!s.pair) {
      for (int t : ts) {
        PsmGraph g2 = g;
        if (t < 0) g2.a_leaves[s.vertex] += 1;
        else g2.edges[{s.vertex, t}] += 1;
        rec(si + 1, g2);
      }
    } else {
      for (std::size_t i1 = 0; i1 < ts.size(); ++i1)
        for (std::size_t i2 = i1; i2 < ts.size(); ++i2) {
          PsmGraph g2 = g;
          for (int t : {ts[i1], ts[i2]}) {
            if (t < 0) g2.a_leaves[s.vertex] += 1;
            else g2.edges[{s.vertex, t}] += 1;
          }
          rec(si + 1, g2);
        }
    }
  };
  rec(0, base);
  return out;
}

std::vector<std::pair<PsmGraph, long long>> enumerate_graphs(int j, int k, int l,
                                                             const EnumerationBounds& bounds) {
  std::vector<PsmGraph> labeled = enumerate_labeled_graphs(j, k, l, bounds);
  std::map<std::string, PsmGraph> classes;
  for (auto& g : labeled) {
    std::string key = g.canonical_key();
    if (!classes.count(key)) classes.emplace(key, g);
  }
  std::vector<std::pair<PsmGraph, long long>> out;
  for (auto& [key, g] : classes) {
    (void)key;
    g.validate(bounds.max_incoming);
    out.emplace_back(g, g.automorphism_count());
  }
  return out;
}

PsmGraph PsmGraph::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::Parse, std::string("bad JSON: ") + e.what());
  }
  try {
    PsmGraph g;
    g.in_count = j.at("in").get<int>();
    g.out_count = j.at("out").get<int>();
    g.internal_count = j.at("internal").get<int>();
    int n = g.vertex_count();
    g.a_leaves.assign(n, 0);
    g.b_leaves.assign(n, 0);
    if (j.contains("edges"))
      for (auto& je : j.at("edges")) g.edges[{je.at(0).get<int>(), je.at(1).get<int>()}] += 1;
    if (j.contains("a_leaves")) g.a_leaves = j.at("a_leaves").get<std::vector<int>>();
    if (j.contains("b_leaves")) g.b_leaves = j.at("b_leaves").get<std::vector<int>>();
    return g;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("bad graph JSON: ") + e.what());
  }
}

std::string PsmGraph::to_json() const {
  json j;
  j["in"] = in_count;
  j["out"] = out_count;
  j["internal"] = internal_count;
  j["edges"] = json::array();
  for (auto& [k, m] : edges)
    for (int i = 0; i < m; ++i) j["edges"].push_back(json::array({k.first, k.second}));
  j["a_leaves"] = a_leaves;
  j["b_leaves"] = b_leaves;
  j["loops"] = loop_count();
  return j.dump(2);
}

Amplitude assemble_amplitude(const PsmGraph& g, const PoissonStructure& pi) {
  g.validate(1000);
  if (pi.dim <= 0) throw Error(ErrorCode::IndexMismatch, "target dimension must be positive");
  int m = pi.dim;
  int n = g.vertex_count();

  // Context: boundary fields per vertex, shared residual fields per index.
  std::vector<GenInfo> gens;
  for (int v = 0; v < n; ++v) {
    if (g.is_in(v))
      for (int al = 0; al < m; ++al)
        gens.push_back({"B" + std::to_string(v) + "_" + std::to_string(al + 1), -1, 0, Role::BoundaryB});
    if (g.is_out(v))
      for (int al = 0; al < m; ++al)
        gens.push_back({"A" + std::to_string(v) + "_" + std::to_string(al + 1), 1, 0, Role::BoundaryA});
  }
  for (int al = 0; al < m; ++al)
    gens.push_back({"a_" + std::to_string(al + 1), 1, 0, Role::ResidualA});
  for (int al = 0; al < m; ++al)
    gens.push_back({"b_" + std::to_string(al + 1), 0, 0, Role::ResidualB});
  auto ctx = std::make_shared<GenContext>(gens);

  // Expand edges into an ordered list; index variables: one per edge, one per leaf.
  struct IndexedItem {
    enum Kind { Edge, ALeaf, BLeaf } kind;
    int src, dst;  // for edges
    int vertex;    // for leaves
  };
  std::vector<IndexedItem> items;
  for (auto& [key, mult] : g.edges)
    for (int i = 0; i < mult; ++i) items.push_back({IndexedItem::Edge, key.first, key.second, -1});
  for (int v = 0; v < n; ++v)
    for (int i = 0; i < g.a_leaves[v]; ++i) items.push_back({IndexedItem::ALeaf, -1, -1, v});
  for (int v = 0; v < n; ++v)
    for (int i = 0; i < g.b_leaves[v]; ++i) items.push_back({IndexedItem::BLeaf, -1, -1, v});

  Poly fields(ctx);
  std::vector<int> assign(items.size(), 0);
  for (;;) {
    // Outgoing indices per internal vertex (ordered pair by item order) and
    // incoming derivative multi-indices.
    std::vector<std::vector<int>> outgoing(n), incoming(n);
    std::vector<int> in_vertex_index(n, -1), out_vertex_index(n, -1);
    for (std::size_t t = 0; t < items.size(); ++t) {
      const auto& it = items[t];
      int al = assign[t];
      if (it.kind == IndexedItem::Edge) {
        if (g.is_in(it.src)) in_vertex_index[it.src] = al;
        else outgoing[it.src].push_back(al);
        if (g.is_out(it.dst)) out_vertex_index[it.dst] = al;
        else incoming[it.dst].push_back(al);
      } else if (it.kind == IndexedItem::ALeaf) {
        if (g.is_in(it.vertex)) in_vertex_index[it.vertex] = al;
        else outgoing[it.vertex].push_back(al);
      } else {
        if (g.is_out(it.vertex)) out_vertex_index[it.vertex] = al;
        else incoming[it.vertex].push_back(al);
      }
    }
    // Tensor coefficient from the internal vertices.
    Scalar coeff(1);
    bool dead = false;
    for (int v = 0; v < n && !dead; ++v) {
      if (!g.is_internal(v)) continue;
      if (outgoing[v].size() != 2) throw Error(ErrorCode::IndexMismatch, "internal vertex arity");
      std::vector<int> derivs = incoming[v];
      std::sort(derivs.begin(), derivs.end());
      Scalar t = pi.derivative_at_zero(outgoing[v][0], outgoing[v][1], derivs);
      if (t.is_zero()) dead = true;
      else coeff *= t;
    }
    if (!dead) {
      // Propagators contribute (-1) each.
      if (items.size() > 0) {
        int edges = 0;
        for (auto& it : items)
          if (it.kind == IndexedItem::Edge) ++edges;
        if (edges % 2) coeff = -coeff;
      }
      // Field monomial in canonical order: B's, A's, a-leaves, b-leaves.
      Poly mono = Poly::constant(ctx, coeff);
      for (int v = 0; v < n; ++v)
        if (g.is_in(v))
          mono = mono * Poly::generator(
                            ctx, ctx->index("B" + std::to_string(v) + "_" +
                                            std::to_string(in_vertex_index[v] + 1)));
      for (int v = 0; v < n; ++v)
        if (g.is_out(v))
          mono = mono * Poly::generator(
                            ctx, ctx->index("A" + std::to_string(v) + "_" +
                                            std::to_string(out_vertex_index[v] + 1)));
      for (std::size_t t = 0; t < items.size(); ++t)
        if (items[t].kind == IndexedItem::ALeaf)
          mono = mono * Poly::generator(ctx, ctx->index("a_" + std::to_string(assign[t] + 1)));
      for (std::size_t t = 0; t < items.size(); ++t)
        if (items[t].kind == IndexedItem::BLeaf)
          mono = mono * Poly::generator(ctx, ctx->index("b_" + std::to_string(assign[t] + 1)));
      fields += mono;
    }
    std::size_t pos = 0;
    while (pos < assign.size()) {
      if (assign[pos] < m - 1) { ++assign[pos]; break; }
      assign[pos] = 0;
      ++pos;
    }
    if (pos == assign.size()) break;
  }

  Amplitude amp;
  amp.graph = g;
  amp.ctx = ctx;
  int loops = g.loop_count();
  GaussianRational iloops = i_power(-loops);  // (-i)^{loops}
  long long aut = g.automorphism_count();
  amp.weight = Scalar::hbar(loops, iloops * GaussianRational(Rat(1, aut)));
  amp.fields = fields;
  amp.propagator_count = g.edge_count();
  std::string r = "(" + amp.weight.str() + ")";
  if (amp.propagator_count > 0)
    r += " * Integral[eta^" + std::to_string(amp.propagator_count) + "]";
  r += " * (" + fields.str() + ")";
  amp.rendered = r;
  return amp;
}

}  // namespace bfq
