#include "nemem/relaxation_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "nemem/errors.hpp"
#include "nemem/membrane.hpp"
#include "nemem/parallel.hpp"

namespace nemem {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;

// Search effort below the top level: axis seeds plus a coarse grid, and
// two fifths of the magnitudes per sign.
constexpr int kInnerAzimuth = 4;
constexpr int kInnerPolar = 2;
constexpr int kInnerB = 4;
// Top-level directions re-examined at depth >= 2: the best depth-1 lines
// plus a coarse grid.
constexpr int kTopK = 16;
constexpr int kOuterAzimuth = 4;
constexpr int kOuterPolar = 2;
constexpr int kOuterB = 4;

struct Dir {
  double az = 0.0, pol = 0.0, bang = 0.0;
  Vec3 a;
  Vec2 b;
};

Vec3 dir_a(double az, double pol) {
  return {std::sin(pol) * std::cos(az), std::sin(pol) * std::sin(az), std::cos(pol)};
}

Vec2 dir_b(double bang) { return {std::cos(bang), std::sin(bang)}; }

Dir make_dir(double az, double pol, double bang) {
  return {az, pol, bang, dir_a(az, pol), dir_b(bang)};
}

// e_i (x) f_j for i = 1..3, j = 1..2.
void add_seed_dirs(std::vector<Dir>& out) {
  const double half = 0.5 * kPi;
  for (const auto& [az, pol] : {std::pair{0.0, half}, std::pair{half, half}, std::pair{0.0, 0.0}})
    for (double bang : {0.0, half}) out.push_back(make_dir(az, pol, bang));
}

void add_grid_dirs(std::vector<Dir>& out, int n_az, int n_pol, int n_b) {
  for (int k = 0; k < n_pol; ++k) {
    const double pol = (k + 0.5) * (0.5 * kPi) / n_pol;
    for (int j = 0; j < n_az; ++j) {
      const double az = 2.0 * kPi * j / n_az;
      for (int m = 0; m < n_b; ++m) out.push_back(make_dir(az, pol, kPi * m / n_b));
    }
  }
}

void add_random_dirs(std::vector<Dir>& out, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < n; ++i) {
    const double pol = std::acos(u(rng));
    const double az = 2.0 * kPi * u(rng);
    const double bang = kPi * u(rng);
    out.push_back(make_dir(az, pol, bang));
  }
}

// Sorted sample abscissae: -t_{n-1} .. -t_0, 0, t_0 .. t_{n-1}, with t log-spaced
// over [1e-3, 10] * max(1, |G|).
std::vector<double> line_abscissae(int n, double norm) {
  const double s = std::max(1.0, norm);
  std::vector<double> mags(n);
  for (int i = 0; i < n; ++i) {
    const double e = (n == 1) ? 0.0 : 4.0 * i / (n - 1);
    mags[i] = 1e-3 * s * std::pow(10.0, e);
  }
  std::vector<double> ts;
  ts.reserve(2 * n + 1);
  for (int i = n - 1; i >= 0; --i) ts.push_back(-mags[i]);
  ts.push_back(0.0);
  for (int i = 0; i < n; ++i) ts.push_back(mags[i]);
  return ts;
}

struct LinePick {
  double value = kInf;
  double tp = 0.0;  // tp = tm = 0: no split
  double tm = 0.0;
};

// Lower convex envelope at t = 0 of the finite samples (ts ascending).
LinePick hull_at_zero(const std::vector<double>& ts, const std::vector<double>& g) {
  thread_local std::vector<int> hull;
  hull.clear();
  for (int i = 0; i < static_cast<int>(ts.size()); ++i) {
    if (!std::isfinite(g[i])) continue;
    while (hull.size() >= 2) {
      const int i0 = hull[hull.size() - 2], i1 = hull.back();
      const double cross =
          (ts[i1] - ts[i0]) * (g[i] - g[i0]) - (g[i1] - g[i0]) * (ts[i] - ts[i0]);
      if (cross < 0.0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(i);
  }
  LinePick pick;
  for (std::size_t k = 0; k < hull.size(); ++k) {
    const double x = ts[hull[k]];
    if (x == 0.0) {
      pick.value = g[hull[k]];
      return pick;
    }
    if (x > 0.0) {
      if (k == 0) return pick;
      const double xm = ts[hull[k - 1]];
      const double theta = -xm / (x - xm);
      pick.value = theta * g[hull[k]] + (1.0 - theta) * g[hull[k - 1]];
      pick.tp = x;
      pick.tm = xm;
      return pick;
    }
  }
  return pick;
}

struct Node {
  bool split = false;
  double az = 0.0, pol = 0.0, bang = 0.0;
  double ltp = 0.0, ltm = 0.0;  // log of the split magnitudes
  int child[2] = {-1, -1};
};
using Tree = std::vector<Node>;

double split_theta(const Node& nd) {
  // theta = |tm| / (tp + |tm|) puts the barycenter at the parent.
  return 1.0 / (1.0 + std::exp(nd.ltp - nd.ltm));
}

Mat32 diagonal_form(const Mat32& G, SingularData* sd_out = nullptr) {
  const SingularData sd = svd32(G);
  if (sd_out) *sd_out = sd;
  return diag_embed(sd.lamM, sd.lamm);
}

class Search {
 public:
  Search(const MaterialParams& p, const OracleConfig& cfg) : W_(p), cfg_(cfg) {
    add_seed_dirs(inner_dirs_);
    add_grid_dirs(inner_dirs_, kInnerAzimuth, kInnerPolar, kInnerB);
    inner_t_ = std::max(8, (2 * cfg.t_grid) / 5);
  }

  const W2DEvaluator& W() const { return W_; }

  // Relaxed value at G using `levels` lamination levels with the inner search.
  double value(const Mat32& G, int levels) const {
    if (levels == 0) return W_(G);
    const Mat32 D = diagonal_form(G);
    return best_inner(D, levels).pick.value;
  }

  struct InnerPick {
    LinePick pick;
    int dir = -1;
  };

  // Best single split of the diagonal matrix D over the inner directions, with
  // children evaluated at levels - 1.
  InnerPick best_inner(const Mat32& D, int levels) const {
    const std::vector<double> ts = line_abscissae(inner_t_, D.norm());
    const double g0 = value(D, levels - 1);
    InnerPick best;
    best.pick.value = g0;
    std::vector<double> g(ts.size());
    for (std::size_t k = 0; k < inner_dirs_.size(); ++k) {
      const LinePick lp = sample_line(D, inner_dirs_[k], ts, g0, levels - 1, g);
      if (lp.value < best.pick.value) {
        best.pick = lp;
        best.dir = static_cast<int>(k);
      }
    }
    return best;
  }

  LinePick sample_line(const Mat32& D, const Dir& d, const std::vector<double>& ts, double g0,
                       int child_levels, std::vector<double>& g) const {
    const Mat32 ab = d.a * d.b.transpose();
    for (std::size_t i = 0; i < ts.size(); ++i)
      g[i] = (ts[i] == 0.0) ? g0 : value(D + ts[i] * ab, child_levels);
    return hull_at_zero(ts, g);
  }

  // Appends the subtree realizing value(G, levels) and returns its index.
  int build(Tree& tree, const Mat32& G, int levels) const {
    const int idx = static_cast<int>(tree.size());
    tree.emplace_back();
    if (levels == 0) return idx;
    const Mat32 D = diagonal_form(G);
    const InnerPick best = best_inner(D, levels);
    if (best.dir < 0) return idx;
    attach_split(tree, idx, D, inner_dirs_[best.dir], best.pick, levels);
    return idx;
  }

  void attach_split(Tree& tree, int idx, const Mat32& D, const Dir& d, const LinePick& lp,
                    int levels) const {
    Node nd;
    nd.split = true;
    nd.az = d.az;
    nd.pol = d.pol;
    nd.bang = d.bang;
    nd.ltp = std::log(lp.tp);
    nd.ltm = std::log(-lp.tm);
    tree[idx] = nd;
    const Mat32 ab = d.a * d.b.transpose();
    const int cp = build(tree, D + lp.tp * ab, levels - 1);
    const int cm = build(tree, D + lp.tm * ab, levels - 1);
    tree[idx].child[0] = cp;
    tree[idx].child[1] = cm;
  }

  // <nu, W_2D> of the tree rooted at idx, placed at G.
  double eval(const Tree& tree, int idx, const Mat32& G) const {
    const Node& nd = tree[idx];
    if (!nd.split) return W_(G);
    const Mat32 D = diagonal_form(G);
    const Mat32 ab = dir_a(nd.az, nd.pol) * dir_b(nd.bang).transpose();
    const double theta = split_theta(nd);
    const double vp = eval(tree, nd.child[0], D + std::exp(nd.ltp) * ab);
    if (vp == kInf) return kInf;
    const double vm = eval(tree, nd.child[1], D - std::exp(nd.ltm) * ab);
    if (vm == kInf) return kInf;
    return theta * vp + (1.0 - theta) * vm;
  }

  // Atoms in the global frame; Qacc, Racc map the local frame of G to it.
  void expand(const Tree& tree, int idx, const Mat32& G, const Mat33& Qacc, const Mat22& Racc,
              double weight, int level, DiscreteYoungMeasure& nu) const {
    const Node& nd = tree[idx];
    if (!nd.split) {
      nu.atoms.push_back({weight, Qacc * G * Racc});
      return;
    }
    SingularData sd;
    const Mat32 D = diagonal_form(G, &sd);
    const Mat33 Q = Qacc * sd.Q;
    const Mat22 R = sd.R * Racc;
    const Mat32 ab = dir_a(nd.az, nd.pol) * dir_b(nd.bang).transpose();
    const double theta = split_theta(nd);
    const Mat32 Gp = D + std::exp(nd.ltp) * ab;
    const Mat32 Gm = D - std::exp(nd.ltm) * ab;
    nu.tree.push_back(make_split(level, theta, Q * Gp * R, Q * Gm * R));
    expand(tree, nd.child[0], Gp, Q, R, weight * theta, level + 1, nu);
    expand(tree, nd.child[1], Gm, Q, R, weight * (1.0 - theta), level + 1, nu);
  }

  // Derivative-free coordinate descent over every split parameter.
  double refine(Tree& tree, const Mat32& D) const {
    std::vector<double*> params;
    std::vector<double> steps;
    for (Node& nd : tree) {
      if (!nd.split) continue;
      for (double* x : {&nd.az, &nd.pol, &nd.bang}) {
        params.push_back(x);
        steps.push_back(0.05);
      }
      for (double* x : {&nd.ltp, &nd.ltm}) {
        params.push_back(x);
        steps.push_back(0.1);
      }
    }
    double best = eval(tree, 0, D);
    for (int sweep = 0; sweep < cfg_.refine_iters && !params.empty(); ++sweep) {
      for (std::size_t k = 0; k < params.size(); ++k) {
        double& x = *params[k];
        const double x0 = x;
        bool improved = false;
        for (double s : {steps[k], -steps[k]}) {
          x = x0 + s;
          const double v = eval(tree, 0, D);
          if (v < best) {
            best = v;
            improved = true;
            break;
          }
        }
        if (!improved) {
          x = x0;
          steps[k] *= 0.5;
        }
      }
    }
    return best;
  }

 private:
  W2DEvaluator W_;
  OracleConfig cfg_;
  std::vector<Dir> inner_dirs_;
  int inner_t_ = 20;
};

struct IndexedPick {
  LinePick pick;
  std::size_t index = 0;
};

// Strict less-than in index order: the lowest index wins ties.
IndexedPick reduce_min(const std::vector<LinePick>& picks, double g0) {
  IndexedPick best;
  best.pick.value = g0;
  best.index = picks.size();
  for (std::size_t i = 0; i < picks.size(); ++i)
    if (picks[i].value < best.pick.value) best = {picks[i], i};
  return best;
}

void require_finite(const Mat32& Ft) {
  if (!Ft.allFinite()) throw InvalidInput("deformation gradient has non-finite entries");
}

}  // namespace

void OracleConfig::validate() const {
  auto positive = [](int v, const char* name) {
    if (v <= 0) throw InvalidInput(std::string("oracle ") + name + " must be > 0, got " + std::to_string(v));
  };
  positive(depth, "depth");
  positive(n_azimuth, "n_azimuth");
  positive(n_polar, "n_polar");
  positive(n_b, "n_b");
  positive(t_grid, "t_grid");
  positive(refine_iters, "refine_iters");
  if (n_random < 0) throw InvalidInput("oracle n_random must be >= 0");
  if (depth > 3) throw InvalidInput("oracle depth must be <= 3, got " + std::to_string(depth));
}

OracleResult relax_lamination(const Mat32& Ft, const MaterialParams& p, const OracleConfig& cfg) {
  p.validate();
  cfg.validate();
  require_finite(Ft);
  SingularData sd;
  const Mat32 D = diagonal_form(Ft, &sd);
  if (classify(sd.lamM, sd.delta, p) == Region::Invalid)
    throw OutOfDomain("relax_lamination: delta > lamM^2 is not realizable");

  const Search search(p, cfg);
  const std::vector<double> ts = line_abscissae(cfg.t_grid, D.norm());

  std::vector<Dir> dirs;
  add_seed_dirs(dirs);
  const std::size_t n_seed = dirs.size();
  add_grid_dirs(dirs, cfg.n_azimuth, cfg.n_polar, cfg.n_b);
  add_random_dirs(dirs, cfg.n_random, cfg.seed);

  // Depth 1 over the full direction set.
  const double w0 = search.W()(D);
  std::vector<LinePick> picks1(dirs.size());
  parallel_for(
      dirs.size(),
      [&](std::size_t i) {
        std::vector<double> g(ts.size());
        picks1[i] = search.sample_line(D, dirs[i], ts, w0, 0, g);
      },
      cfg.threads);
  const IndexedPick best1 = reduce_min(picks1, w0);

  Tree tree1(1);
  if (best1.index < dirs.size()) search.attach_split(tree1, 0, D, dirs[best1.index], best1.pick, 1);
  double value1 = search.refine(tree1, D);
  Tree best_tree = tree1;
  double best_value = value1;

  if (cfg.depth >= 2) {
    std::vector<std::size_t> order(dirs.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return picks1[x].value < picks1[y].value; });
    std::vector<Dir> outer(dirs.begin(), dirs.begin() + n_seed);
    int taken = 0;
    for (std::size_t k = 0; k < order.size() && taken < kTopK; ++k) {
      if (order[k] < n_seed) continue;
      outer.push_back(dirs[order[k]]);
      ++taken;
    }
    add_grid_dirs(outer, kOuterAzimuth, kOuterPolar, kOuterB);

    const int child_levels = cfg.depth - 1;
    const double g0 = search.value(D, child_levels);
    std::vector<LinePick> picks2(outer.size());
    parallel_for(
        outer.size(),
        [&](std::size_t i) {
          std::vector<double> g(ts.size());
          picks2[i] = search.sample_line(D, outer[i], ts, g0, child_levels, g);
        },
        cfg.threads);
    const IndexedPick best2 = reduce_min(picks2, g0);

    Tree tree2;
    if (best2.index < outer.size()) {
      tree2.emplace_back();
      search.attach_split(tree2, 0, D, outer[best2.index], best2.pick, cfg.depth);
    } else {
      search.build(tree2, D, child_levels);
    }
    const double value2 = search.refine(tree2, D);
    if (value2 < best_value) {
      best_value = value2;
      best_tree = std::move(tree2);
    }
  }

  OracleResult out;
  if (!best_tree[0].split) {
    out.best_measure = DiscreteYoungMeasure::dirac(Ft);
  } else {
    search.expand(best_tree, 0, D, sd.Q, sd.R, 1.0, 1, out.best_measure);
    out.best_measure.normalize();
  }
  int depth_used = 0;
  for (const Split& s : out.best_measure.tree) depth_used = std::max(depth_used, s.level);
  out.depth_used = depth_used;
  const W2DEvaluator& W = search.W();
  out.value = measure_pairing(out.best_measure, [&](const Mat32& G) { return W(G); });
  out.closed_form = energy_Wmem(Ft, p).energy;
  out.gap = out.value - out.closed_form;
  return out;
}

double relax_along_line(const Mat32& Ft, const Vec3& a, const Vec2& b, const MaterialParams& p) {
  p.validate();
  require_finite(Ft);
  if (!(a.allFinite() && b.allFinite() && a.norm() > 0.0 && b.norm() > 0.0))
    throw InvalidInput("relax_along_line: directions must be finite and nonzero");
  const W2DEvaluator W(p);
  const Mat32 ab = a.normalized() * b.normalized().transpose();
  const std::vector<double> ts = line_abscissae(OracleConfig{}.t_grid, Ft.norm());
  std::vector<double> g(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) g[i] = W(Ft + ts[i] * ab);
  return hull_at_zero(ts, g).value;
}

}  // namespace nemem
