#include "bfq/kontsevich.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <thread>

#include <nlohmann/json.hpp>

namespace bfq {

using nlohmann::json;
using cplx = std::complex<double>;

void WeightGraph::validate() const {
  if (internal < 1 || internal > 2)
    throw Error(ErrorCode::BoundsTooLarge, "weight integrals support one or two free vertices");
  if (static_cast<int>(edges.size()) != internal)
    throw Error(ErrorCode::Invalid, "each free vertex needs exactly one slot pair");
  for (int v = 0; v < internal; ++v) {
    for (int t : {edges[v].first, edges[v].second}) {
      if (t == v) throw Error(ErrorCode::Invalid, "short loops are not admissible");
      if (t < -2 || t >= internal) throw Error(ErrorCode::Invalid, "bad edge target");
    }
  }
}

WeightGraph WeightGraph::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::Parse, std::string("bad JSON: ") + e.what());
  }
  try {
    WeightGraph g;
    g.internal = j.at("internal").get<int>();
    for (auto& je : j.at("edges")) {
      // entries: [src, target] with target "g0"/"g1"/vertex index
      int src = je.at(0).get<int>();
      int tgt;
      if (je.at(1).is_string()) {
        std::string s = je.at(1).get<std::string>();
        if (s == "g0") tgt = -2;
        else if (s == "g1") tgt = -1;
        else throw Error(ErrorCode::Parse, "edge target must be g0, g1 or a vertex index");
      } else {
        tgt = je.at(1).get<int>();
      }
      if (src < 0 || src >= g.internal) throw Error(ErrorCode::Parse, "bad edge source");
      while (static_cast<int>(g.edges.size()) <= src) g.edges.emplace_back(-3, -3);
      if (g.edges[src].first == -3) g.edges[src].first = tgt;
      else if (g.edges[src].second == -3) g.edges[src].second = tgt;
      else throw Error(ErrorCode::Parse, "more than two edges from one vertex");
    }
    while (static_cast<int>(g.edges.size()) < g.internal) g.edges.emplace_back(-3, -3);
    for (auto& [a, b] : g.edges)
      if (a == -3 || b == -3) throw Error(ErrorCode::Parse, "every free vertex needs two edges");
    g.validate();
    return g;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("bad weight-graph JSON: ") + e.what());
  }
}

namespace {

// Hyperbolic angle phi(z, w) = arg((w - z)/(w - conj z)) and its gradient with
// respect to the real coordinates of z and w.
struct AngleGrad {
  double dzx, dzy, dwx, dwy;
};

AngleGrad angle_gradient(cplx z, cplx w) {
  // phi = arg(u) - arg(v), u = w - z, v = w - conj(z).
  cplx u = w - z;
  cplx v = w - std::conj(z);
  double nu = std::norm(u), nv = std::norm(v);
  // d arg(u)/d Re(u) = -Im u/|u|^2, d arg(u)/d Im(u) = Re u/|u|^2.
  double aux = -u.imag() / nu, auy = u.real() / nu;
  double avx = -v.imag() / nv, avy = v.real() / nv;
  AngleGrad g{};
  // phi = arg u - arg v with u, v depending on z as -dz, -d(conj z) and on w as +dw.
  g.dzx = -aux + avx;
  g.dzy = -auy - avy;
  g.dwx = aux - avx;
  g.dwy = auy - avy;
  return g;
}

// Charts over the upper half-plane adapted to the corners at 0, 1, infinity.
struct Chart {
  // map (s, t) in (0,1)^2 to z in H with the Jacobian of the map
  std::function<cplx(double, double, double&)> map;
};

constexpr double kLogDepth = 34.0;  // exp(-34) ~ 2e-15: tail truncation

std::vector<Chart> vertex_charts() {
  std::vector<Chart> charts;
  // Charts carry |J| of (s,t) -> (x,y); the integrand is a density with
  // respect to the standard orientation of H.
  // Near 0: z = (1/2) e^{-a + i pi t}, a in (0, L).
  charts.push_back({[](double s, double t, double& jac) {
    double a = kLogDepth * s;
    double r = 0.5 * std::exp(-a);
    double th = M_PI * t;
    jac = kLogDepth * M_PI * r * r;
    return cplx(r * std::cos(th), r * std::sin(th));
  }});
  // Near 1: same, centered at 1.
  charts.push_back({[](double s, double t, double& jac) {
    double a = kLogDepth * s;
    double r = 0.5 * std::exp(-a);
    double th = M_PI * t;
    jac = kLogDepth * M_PI * r * r;
    return cplx(1.0 + r * std::cos(th), r * std::sin(th));
  }});
  // Near infinity: z = 2 e^{+a + i pi t}, a in (0, L): dx dy = pi r^2 da dt.
  charts.push_back({[](double s, double t, double& jac) {
    double a = kLogDepth * s;
    double r = 2.0 * std::exp(a);
    double th = M_PI * t;
    jac = kLogDepth * M_PI * r * r;
    return cplx(r * std::cos(th), r * std::sin(th));
  }});
  // Bulk: box [-2, 3] x (0, 2], minus the three disks (indicator).
  charts.push_back({[](double s, double t, double& jac) {
    double x = -2.0 + 5.0 * s;
    double y = 2.0 * t;
    cplx z(x, y);
    bool inside = std::abs(z) > 0.5 && std::abs(z - cplx(1.0, 0.0)) > 0.5 && std::abs(z) < 2.0;
    jac = inside ? 10.0 : 0.0;
    return z;
  }});
  return charts;
}

}  // namespace

WeightEstimate kontsevich_weight(const WeightGraph& g, std::uint64_t samples, std::uint64_t seed,
                                 int threads) {
  g.validate();
  int q = g.internal;
  auto charts = vertex_charts();
  std::size_t nc = charts.size();
  std::size_t regions = 1;
  for (int v = 0; v < q; ++v) regions *= nc;

  // Edge list in slot order.
  std::vector<std::pair<int, int>> edge_list;
  for (int v = 0; v < q; ++v) {
    edge_list.emplace_back(v, g.edges[v].first);
    edge_list.emplace_back(v, g.edges[v].second);
  }
  const int dim = 2 * q;  // rows: edges (2q of them = dim): square Jacobian

  auto integrand = [&](const std::vector<cplx>& z) {
    // Rows: d phi_e; columns: (x_1, y_1, x_2, y_2).
    double jac[4][4] = {{0}};
    for (std::size_t e = 0; e < edge_list.size(); ++e) {
      auto [src, tgt] = edge_list[e];
      cplx w = (tgt == -2) ? cplx(0.0, 0.0) : (tgt == -1) ? cplx(1.0, 0.0) : z[tgt];
      AngleGrad gr = angle_gradient(z[src], w);
      jac[e][2 * src] += gr.dzx;
      jac[e][2 * src + 1] += gr.dzy;
      if (tgt >= 0) {
        jac[e][2 * tgt] += gr.dwx;
        jac[e][2 * tgt + 1] += gr.dwy;
      }
    }
    // Determinant of the dim x dim block.
    if (dim == 2) {
      return jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
    }
    // 4x4 by cofactor expansion.
    double det = 0.0;
    int idx[4] = {0, 1, 2, 3};
    // permutation expansion (24 terms) is fine here
    std::vector<int> perm(idx, idx + 4);
    std::sort(perm.begin(), perm.end());
    do {
      int sign = 1;
      for (int i = 0; i < 4; ++i)
        for (int jj = i + 1; jj < 4; ++jj)
          if (perm[i] > perm[jj]) sign = -sign;
      double p = sign;
      for (int i = 0; i < 4; ++i) p *= jac[i][perm[i]];
      det += p;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return det;
  };

  // Deterministic substreams: fixed count, independent of the thread count.
  const std::uint64_t substreams_per_region = 32;
  std::uint64_t per_sub = samples / (regions * substreams_per_region);
  if (per_sub == 0) per_sub = 1;

  struct Acc {
    double sum = 0.0, sumsq = 0.0;
    std::uint64_t n = 0;
  };
  std::vector<Acc> accs(regions * substreams_per_region);

  auto run_substream = [&](std::size_t region, std::uint64_t sub) {
    std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * (region * 1024 + sub + 1)));
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    Acc acc;
    std::vector<std::size_t> chart_of(q);
    std::size_t r = region;
    for (int v = 0; v < q; ++v) {
      chart_of[v] = r % nc;
      r /= nc;
    }
    std::vector<cplx> z(q);
    for (std::uint64_t i = 0; i < per_sub; ++i) {
      double weight = 1.0;
      for (int v = 0; v < q; ++v) {
        double jac = 0.0;
        z[v] = charts[chart_of[v]].map(uni(rng), uni(rng), jac);
        weight *= jac;
      }
      double f = 0.0;
      if (weight != 0.0) f = integrand(z) * weight;
      acc.sum += f;
      acc.sumsq += f * f;
      acc.n += 1;
    }
    accs[region * substreams_per_region + sub] = acc;
  };

  unsigned hw = std::thread::hardware_concurrency();
  unsigned nthreads = threads > 0 ? static_cast<unsigned>(threads) : (hw ? hw : 1);
  nthreads = std::min<unsigned>(nthreads, 16);
  std::vector<std::pair<std::size_t, std::uint64_t>> work;
  for (std::size_t region = 0; region < regions; ++region)
    for (std::uint64_t sub = 0; sub < substreams_per_region; ++sub) work.emplace_back(region, sub);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= work.size()) break;
      run_substream(work[i].first, work[i].second);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  // Combine per region (mean of substream means), then sum regions.
  double total = 0.0, var = 0.0;
  std::uint64_t used = 0;
  for (std::size_t region = 0; region < regions; ++region) {
    double rsum = 0.0, rsumsq = 0.0;
    std::uint64_t rn = 0;
    for (std::uint64_t sub = 0; sub < substreams_per_region; ++sub) {
      const Acc& a = accs[region * substreams_per_region + sub];
      rsum += a.sum;
      rsumsq += a.sumsq;
      rn += a.n;
    }
    double mean = rsum / static_cast<double>(rn);
    double meansq = rsumsq / static_cast<double>(rn);
    total += mean;
    var += std::max(0.0, meansq - mean * mean) / static_cast<double>(rn);
    used += rn;
  }
  double norm = std::pow(2.0 * M_PI, -2.0 * q);
  WeightEstimate est;
  est.value = total * norm;
  est.sigma = std::sqrt(var) * norm;
  est.samples = used;
  return est;
}

WeightEstimate kontsevich_weight_checked(const WeightGraph& g, std::uint64_t samples,
                                         std::uint64_t seed, double tolerance, int threads) {
  WeightEstimate est = kontsevich_weight(g, samples, seed, threads);
  if (!(est.sigma <= tolerance))
    throw Error(ErrorCode::NonConvergent, "statistical error " + std::to_string(est.sigma) +
                                              " above tolerance after " + std::to_string(est.samples) +
                                              " samples");
  return est;
}

}  // namespace bfq
