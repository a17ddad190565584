#include "bfq/cell_complex.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

namespace bfq {

using nlohmann::json;

CellComplex CellComplex::build(int dimension, std::vector<RawCell> cells,
                               std::set<std::string> in_boundary, std::set<std::string> out_boundary) {
  if (dimension < 0) throw Error(ErrorCode::Invalid, "dimension must be non-negative");
  CellComplex x;
  x.dimension_ = dimension;
  std::sort(cells.begin(), cells.end(), [](const RawCell& a, const RawCell& b) {
    return a.dim != b.dim ? a.dim < b.dim : a.id < b.id;
  });
  x.cells_ = std::move(cells);
  x.in_ = std::move(in_boundary);
  x.out_ = std::move(out_boundary);
  for (std::size_t i = 0; i < x.cells_.size(); ++i) {
    if (!x.index_.emplace(x.cells_[i].id, i).second)
      throw Error(ErrorCode::Invalid, "duplicate cell id '" + x.cells_[i].id + "'");
  }
  x.validate();
  return x;
}

const RawCell& CellComplex::cell(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw Error(ErrorCode::DanglingFace, "unknown cell '" + id + "'");
  return cells_[it->second];
}

void CellComplex::validate() const {
  for (const auto& c : cells_) {
    if (c.dim < 0 || c.dim > dimension_)
      throw Error(ErrorCode::Invalid, "cell '" + c.id + "' has dimension " + std::to_string(c.dim) +
                                          " outside 0.." + std::to_string(dimension_));
    for (auto& [fid, coef] : c.boundary) {
      auto it = index_.find(fid);
      if (it == index_.end())
        throw Error(ErrorCode::DanglingFace, "cell '" + c.id + "' references unknown face '" + fid + "'");
      if (cells_[it->second].dim != c.dim - 1)
        throw Error(ErrorCode::DanglingFace, "cell '" + c.id + "' lists face '" + fid +
                                                 "' of dimension " + std::to_string(cells_[it->second].dim));
      (void)coef;
    }
  }
  // dd = 0, cell by cell.
  for (const auto& c : cells_) {
    if (c.dim < 2) continue;
    std::map<std::string, long long> dd;
    for (auto& [fid, cf] : c.boundary) {
      const RawCell& f = cell(fid);
      for (auto& [eid, ce] : f.boundary) dd[eid] += cf * ce;
    }
    for (auto& [eid, v] : dd)
      if (v != 0)
        throw Error(ErrorCode::NonSquareZero,
                    "dd != 0 at cell '" + c.id + "' (coefficient " + std::to_string(v) + " on '" + eid + "')");
  }
  // Markings: known ids, disjoint, closed under faces with the same label.
  for (auto* part : {&in_, &out_})
    for (const auto& id : *part)
      if (!index_.count(id))
        throw Error(ErrorCode::BoundaryMarkingNotClosed, "marked cell '" + id + "' does not exist");
  for (const auto& id : in_)
    if (out_.count(id))
      throw Error(ErrorCode::BoundaryMarkingNotClosed, "cell '" + id + "' marked both in and out");
  auto check_closed = [&](const std::set<std::string>& part, const char* label) {
    for (const auto& id : part)
      for (auto& [fid, cf] : cell(id).boundary) {
        (void)cf;
        if (!part.count(fid))
          throw Error(ErrorCode::BoundaryMarkingNotClosed,
                      "face '" + fid + "' of " + label + "-cell '" + id + "' is not marked " + label);
      }
  };
  check_closed(in_, "in");
  check_closed(out_, "out");
}

std::vector<std::string> CellComplex::cells_of_dim(int k) const {
  std::vector<std::string> out;
  for (const auto& c : cells_)
    if (c.dim == k) out.push_back(c.id);
  return out;  // cells_ sorted by (dim, id)
}

long long CellComplex::incidence(const std::string& f, const std::string& e) const {
  const RawCell& c = cell(f);
  long long v = 0;
  for (auto& [id, cf] : c.boundary)
    if (id == e) v += cf;
  return v;
}

long long CellComplex::euler_characteristic() const {
  long long chi = 0;
  for (const auto& c : cells_) chi += (c.dim % 2 == 0) ? 1 : -1;
  return chi;
}

CellComplex CellComplex::subdivide_edge(const std::string& edge, const std::string& new_vertex,
                                        const std::string& new_edge_a, const std::string& new_edge_b) const {
  const RawCell& e = cell(edge);
  if (e.dim != 1) throw Error(ErrorCode::Invalid, "subdivide_edge needs a 1-cell");
  if (e.boundary.size() != 2 || e.boundary[0].first == e.boundary[1].first ||
      e.boundary[0].second + e.boundary[1].second != 0)
    throw Error(ErrorCode::Invalid, "subdivide_edge needs an edge with two distinct endpoints");
  std::vector<RawCell> cells;
  for (const auto& c : cells_) {
    if (c.id == edge) continue;
    RawCell copy = c;
    if (c.dim == 2) {
      // Replace e by ea + eb in the boundary chain.
      std::vector<std::pair<std::string, long long>> nb;
      for (auto& [fid, cf] : copy.boundary) {
        if (fid == edge) {
          nb.emplace_back(new_edge_a, cf);
          nb.emplace_back(new_edge_b, cf);
        } else {
          nb.emplace_back(fid, cf);
        }
      }
      copy.boundary = nb;
    }
    cells.push_back(copy);
  }
  cells.push_back({new_vertex, 0, {}});
  // e had boundary sum_i c_i v_i; orient ea from the e-start to w, eb from w to the e-end.
  // For a general chain we put the original chain on eb and close ea through w.
  RawCell ea{new_edge_a, 1, {}};
  RawCell eb{new_edge_b, 1, {}};
  ea.boundary.emplace_back(new_vertex, 1);
  eb.boundary.emplace_back(new_vertex, -1);
  for (auto& [fid, cf] : e.boundary) {
    if (cf < 0) ea.boundary.emplace_back(fid, cf);
    else eb.boundary.emplace_back(fid, cf);
  }
  cells.push_back(ea);
  cells.push_back(eb);
  std::set<std::string> in = in_, out = out_;
  if (in.count(edge)) { in.erase(edge); in.insert({new_vertex, new_edge_a, new_edge_b}); }
  if (out.count(edge)) { out.erase(edge); out.insert({new_vertex, new_edge_a, new_edge_b}); }
  return build(dimension_, std::move(cells), std::move(in), std::move(out));
}

CellComplex CellComplex::reversed() const {
  CellComplex x = *this;
  std::swap(x.in_, x.out_);
  return x;
}

CellComplex CellComplex::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::Parse, std::string("bad JSON: ") + e.what());
  }
  try {
    int dim = j.at("dimension").get<int>();
    std::vector<RawCell> cells;
    for (auto& jc : j.at("cells")) {
      RawCell c;
      c.id = jc.at("id").get<std::string>();
      c.dim = jc.at("dim").get<int>();
      if (jc.contains("boundary"))
        for (auto& jb : jc.at("boundary"))
          c.boundary.emplace_back(jb.at(0).get<std::string>(), jb.at(1).get<long long>());
      cells.push_back(std::move(c));
    }
    std::set<std::string> in, out;
    if (j.contains("in_boundary")) for (auto& s : j.at("in_boundary")) in.insert(s.get<std::string>());
    if (j.contains("out_boundary")) for (auto& s : j.at("out_boundary")) out.insert(s.get<std::string>());
    return build(dim, std::move(cells), std::move(in), std::move(out));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("bad complex JSON: ") + e.what());
  }
}

std::string CellComplex::to_json() const {
  json j;
  j["dimension"] = dimension_;
  j["cells"] = json::array();
  for (const auto& c : cells_) {
    json jc;
    jc["id"] = c.id;
    jc["dim"] = c.dim;
    jc["boundary"] = json::array();
    for (auto& [fid, cf] : c.boundary) jc["boundary"].push_back(json::array({fid, cf}));
    j["cells"].push_back(jc);
  }
  j["in_boundary"] = std::vector<std::string>(in_.begin(), in_.end());
  j["out_boundary"] = std::vector<std::string>(out_.begin(), out_.end());
  return j.dump(2);
}

CellComplex interval_complex(int segments, const std::string& prefix) {
  if (segments < 1) throw Error(ErrorCode::Invalid, "interval needs >= 1 segment");
  std::vector<RawCell> cells;
  for (int i = 0; i <= segments; ++i) cells.push_back({prefix + "v" + std::to_string(i), 0, {}});
  for (int i = 0; i < segments; ++i) {
    RawCell e{prefix + "e" + std::to_string(i), 1, {}};
    e.boundary.emplace_back(prefix + "v" + std::to_string(i + 1), 1);
    e.boundary.emplace_back(prefix + "v" + std::to_string(i), -1);
    cells.push_back(e);
  }
  return CellComplex::build(1, std::move(cells), {prefix + "v0"}, {prefix + "v" + std::to_string(segments)});
}

CellComplex circle_complex(int segments, const std::string& prefix) {
  if (segments < 1) throw Error(ErrorCode::Invalid, "circle needs >= 1 segment");
  std::vector<RawCell> cells;
  for (int i = 0; i < segments; ++i) cells.push_back({prefix + "v" + std::to_string(i), 0, {}});
  for (int i = 0; i < segments; ++i) {
    RawCell e{prefix + "e" + std::to_string(i), 1, {}};
    int a = i, b = (i + 1) % segments;
    if (a == b) continue;  // handled below
    e.boundary.emplace_back(prefix + "v" + std::to_string(b), 1);
    e.boundary.emplace_back(prefix + "v" + std::to_string(a), -1);
    cells.push_back(e);
  }
  if (segments == 1) cells.push_back({prefix + "e0", 1, {}});  // de = v - v = 0
  return CellComplex::build(1, std::move(cells), {}, {});
}

CellComplex cylinder_complex(int segments) {
  if (segments < 2) throw Error(ErrorCode::Invalid, "cylinder needs >= 2 segments around");
  std::vector<RawCell> cells;
  auto id = [&](const std::string& base, int layer) { return base + "L" + std::to_string(layer); };
  // Two circle layers (0 = in, 1 = out) and the connecting cells.
  for (int layer = 0; layer <= 1; ++layer) {
    for (int i = 0; i < segments; ++i) cells.push_back({id("v" + std::to_string(i), layer), 0, {}});
    for (int i = 0; i < segments; ++i) {
      RawCell e{id("e" + std::to_string(i), layer), 1, {}};
      e.boundary.emplace_back(id("v" + std::to_string((i + 1) % segments), layer), 1);
      e.boundary.emplace_back(id("v" + std::to_string(i), layer), -1);
      cells.push_back(e);
    }
  }
  for (int i = 0; i < segments; ++i) {
    RawCell e{"w" + std::to_string(i), 1, {}};  // vertical edge v_i x I
    e.boundary.emplace_back(id("v" + std::to_string(i), 1), 1);
    e.boundary.emplace_back(id("v" + std::to_string(i), 0), -1);
    cells.push_back(e);
  }
  for (int i = 0; i < segments; ++i) {
    // Face e_i x I; d(e x I) = de x I + (-1)^1 ... using d(a x b) = da x b + (-1)^{dim a} a x db
    // with a = e_i (1-cell), b = I: d(e_i x I) = (v_{i+1} - v_i) x I - e_i x (1 - 0).
    RawCell f{"f" + std::to_string(i), 2, {}};
    f.boundary.emplace_back("w" + std::to_string((i + 1) % segments), 1);
    f.boundary.emplace_back("w" + std::to_string(i), -1);
    f.boundary.emplace_back(id("e" + std::to_string(i), 1), -1);
    f.boundary.emplace_back(id("e" + std::to_string(i), 0), 1);
    cells.push_back(f);
  }
  std::set<std::string> in, out;
  for (int i = 0; i < segments; ++i) {
    in.insert(id("v" + std::to_string(i), 0));
    in.insert(id("e" + std::to_string(i), 0));
    out.insert(id("v" + std::to_string(i), 1));
    out.insert(id("e" + std::to_string(i), 1));
  }
  return CellComplex::build(2, std::move(cells), std::move(in), std::move(out));
}

CellComplex disk_complex() {
  std::vector<RawCell> cells;
  cells.push_back({"v", 0, {}});
  cells.push_back({"e", 1, {}});           // de = v - v = 0
  cells.push_back({"f", 2, {{"e", 1}}});   // df = e
  return CellComplex::build(2, std::move(cells), {}, {"v", "e"});
}

namespace {
CellComplex with_prefix(const CellComplex& x, const std::string& prefix) {
  std::vector<RawCell> cells;
  for (const auto& c : x.cells()) {
    RawCell n = c;
    n.id = prefix + c.id;
    for (auto& [fid, cf] : n.boundary) { (void)cf; fid = prefix + fid; }
    cells.push_back(n);
  }
  std::set<std::string> in, out;
  for (auto& s : x.in_boundary()) in.insert(prefix + s);
  for (auto& s : x.out_boundary()) out.insert(prefix + s);
  return CellComplex::build(x.dimension(), std::move(cells), std::move(in), std::move(out));
}
}  // namespace

CellComplex disjoint_union(const CellComplex& a, const CellComplex& b, const std::string& prefix_a,
                           const std::string& prefix_b) {
  CellComplex pa = with_prefix(a, prefix_a);
  CellComplex pb = with_prefix(b, prefix_b);
  std::vector<RawCell> cells = pa.cells();
  for (const auto& c : pb.cells()) cells.push_back(c);
  std::set<std::string> in = pa.in_boundary(), out = pa.out_boundary();
  in.insert(pb.in_boundary().begin(), pb.in_boundary().end());
  out.insert(pb.out_boundary().begin(), pb.out_boundary().end());
  return CellComplex::build(std::max(pa.dimension(), pb.dimension()), std::move(cells), std::move(in),
                            std::move(out));
}

CellComplex glue_complexes(const CellComplex& a, const CellComplex& b,
                           const std::map<std::string, std::string>& identify) {
  // identify: out-cell of a -> in-cell of b, a bijection onto b's in-boundary.
  std::set<std::string> used_b;
  for (auto& [ca, cb] : identify) {
    if (!a.is_out(ca)) throw Error(ErrorCode::InterfaceMismatch, "'" + ca + "' is not an out-cell of the left complex");
    if (!b.is_in(cb)) throw Error(ErrorCode::InterfaceMismatch, "'" + cb + "' is not an in-cell of the right complex");
    if (a.cell(ca).dim != b.cell(cb).dim)
      throw Error(ErrorCode::InterfaceMismatch, "interface cells '" + ca + "' and '" + cb + "' differ in dimension");
    if (!used_b.insert(cb).second)
      throw Error(ErrorCode::InterfaceMismatch, "in-cell '" + cb + "' identified twice");
  }
  if (identify.size() != a.out_boundary().size() || identify.size() != b.in_boundary().size())
    throw Error(ErrorCode::InterfaceMismatch, "interface must match the whole out/in boundary");
  // Interface must be compatible with incidences.
  for (auto& [ca, cb] : identify) {
    const RawCell& xa = a.cell(ca);
    const RawCell& xb = b.cell(cb);
    std::map<std::string, long long> ba, bb;
    for (auto& [f, c] : xa.boundary) ba[identify.count(f) ? identify.at(f) : f] += c;
    for (auto& [f, c] : xb.boundary) bb[f] += c;
    if (ba != bb)
      throw Error(ErrorCode::InterfaceMismatch, "incidences of '" + ca + "' and '" + cb + "' do not match");
  }
  std::vector<RawCell> cells = a.cells();
  std::map<std::string, std::string> rename;  // b id -> glued id
  for (auto& [ca, cb] : identify) rename[cb] = ca;
  for (const auto& c : b.cells()) {
    if (!rename.count(c.id) && a.has_cell(c.id))
      throw Error(ErrorCode::InterfaceMismatch,
                  "cell id '" + c.id + "' appears in both complexes but is not identified");
    if (rename.count(c.id)) continue;  // identified with an a-cell
    RawCell n = c;
    for (auto& [fid, cf] : n.boundary) {
      (void)cf;
      auto it = rename.find(fid);
      if (it != rename.end()) fid = it->second;
    }
    cells.push_back(n);
  }
  std::set<std::string> in = a.in_boundary();
  std::set<std::string> out = b.out_boundary();
  return CellComplex::build(std::max(a.dimension(), b.dimension()), std::move(cells), std::move(in),
                            std::move(out));
}

}  // namespace bfq
