#include "prw/exact_ot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace prw {

namespace {

constexpr double kMarginalTol = 1e-9;

double power_cost(double diff_norm, double p) {
  if (p == 2.0) return diff_norm * diff_norm;
  if (p == 1.0) return diff_norm;
  return std::pow(diff_norm, p);
}

void check_marginal(const Eigen::VectorXd& w, const char* name) {
  if (w.size() < 1) throw InvalidInputError(std::string(name) + ": empty marginal");
  if (!w.allFinite() || w.minCoeff() < 0.0)
    throw InvalidInputError(std::string(name) + ": marginals must be finite and nonnegative");
}

// Transportation simplex on a dense cost matrix. Nodes 0..n-1 are rows,
// n..n+m-1 are columns; the basis is a spanning tree of n+m-1 arcs. Costs
// are copied to a row-major buffer so pricing scans run over contiguous
// memory; duals are updated incrementally on the re-rooted subtree.
class TransportSimplex {
 public:
  TransportSimplex(const Eigen::MatrixXd& cost, const Eigen::VectorXd& r,
                   const Eigen::VectorXd& c)
      : n_(static_cast<int>(r.size())),
        m_(static_cast<int>(c.size())),
        nodes_(n_ + m_),
        supply_(r.data(), r.data() + n_),
        demand_(c.data(), c.data() + m_) {
    cost_.resize(static_cast<std::size_t>(n_) * m_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < m_; ++j) cost_[static_cast<std::size_t>(i) * m_ + j] = cost(i, j);
    // Lexicographic-style perturbation scaled to the smallest positive mass;
    // it removes ties in the north-west-corner fill and keeps basic flows
    // away from zero during pivoting.
    double min_pos = 1.0;
    for (double w : supply_)
      if (w > 0.0) min_pos = std::min(min_pos, w);
    for (double w : demand_)
      if (w > 0.0) min_pos = std::min(min_pos, w);
    eps_ = 1e-12 * min_pos;
    for (double& w : supply_) w += eps_;
    demand_.back() += eps_ * n_;

    arc_row_.reserve(nodes_ - 1);
    arc_col_.reserve(nodes_ - 1);
    arc_flow_.reserve(nodes_ - 1);
    adjacency_.assign(nodes_, {});
    parent_.assign(nodes_, -1);
    parent_arc_.assign(nodes_, -1);
    depth_.assign(nodes_, 0);
    dual_.assign(nodes_, 0.0);
    visit_stamp_.assign(nodes_, 0);
    bfs_order_.reserve(nodes_);

    northwest_corner();
    rebuild_tree();
  }

  void run() {
    const long long max_pivots = 2000LL * (n_ + m_) + 100000LL;
    double cost_scale = 1.0;
    for (double v : cost_) cost_scale = std::max(cost_scale, std::abs(v));
    const double tol = 1e-12 * cost_scale;
    block_size_ = std::max(64, static_cast<int>(std::sqrt(static_cast<double>(n_) * m_)) * 2);

    int degenerate_streak = 0;
    bool bland = false;
    for (long long pivots = 0; pivots < max_pivots; ++pivots) {
      int ei, ej;
      if (!price(tol, bland, ei, ej)) return;  // optimal
      const bool degenerate = pivot(ei, ej);
      if (degenerate) {
        if (++degenerate_streak > 3 * (n_ + m_)) bland = true;
      } else {
        degenerate_streak = 0;
        bland = false;
      }
    }
    throw std::runtime_error("solve_exact_ot: pivot limit exceeded");
  }

  // Re-solves the final spanning tree against the unperturbed marginals by
  // leaf stripping; flows on a tree are uniquely determined by them.
  OtSolution extract(const Eigen::VectorXd& r, const Eigen::VectorXd& c) const {
    std::vector<double> residual(nodes_);
    for (int i = 0; i < n_; ++i) residual[i] = r(i);
    for (int j = 0; j < m_; ++j) residual[n_ + j] = c(j);

    std::vector<int> degree(nodes_);
    std::vector<std::vector<int>> adj = adjacency_;
    for (int v = 0; v < nodes_; ++v) degree[v] = static_cast<int>(adj[v].size());
    std::vector<char> arc_done(arc_row_.size(), 0);
    std::vector<int> queue;
    queue.reserve(nodes_);
    for (int v = 0; v < nodes_; ++v)
      if (degree[v] == 1) queue.push_back(v);

    std::vector<double> flow(arc_row_.size(), 0.0);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int v = queue[head];
      if (degree[v] != 1) continue;
      int arc = -1;
      for (int id : adj[v])
        if (!arc_done[id]) arc = id;
      if (arc < 0) continue;
      const int other = (v == arc_row_[arc]) ? n_ + arc_col_[arc] : arc_row_[arc];
      flow[arc] = residual[v];
      residual[other] -= residual[v];
      residual[v] = 0.0;
      arc_done[arc] = 1;
      if (--degree[other] == 1) queue.push_back(other);
      degree[v] = 0;
    }

    OtSolution out;
    out.plan.row_marginal = r;
    out.plan.col_marginal = c;
    long double value = 0.0L;
    out.plan.entries.reserve(arc_row_.size());
    for (std::size_t id = 0; id < arc_row_.size(); ++id) {
      double mass = flow[id];
      if (mass < 0.0) mass = 0.0;  // degenerate basis flow, zero up to rounding
      out.plan.entries.push_back({arc_row_[id], arc_col_[id], mass});
      value += static_cast<long double>(mass) * cost_at(arc_row_[id], arc_col_[id]);
    }
    out.value = static_cast<double>(value);
    return out;
  }

 private:
  void northwest_corner() {
    std::vector<double> a = supply_, b = demand_;
    int i = 0, j = 0;
    while (true) {
      const double t = std::min(a[i], b[j]);
      add_arc(i, j, t);
      a[i] -= t;
      b[j] -= t;
      if (i == n_ - 1 && j == m_ - 1) break;
      if (j == m_ - 1)
        ++i;
      else if (i == n_ - 1)
        ++j;
      else if (a[i] <= b[j])
        ++i;
      else
        ++j;
    }
  }

  void add_arc(int i, int j, double flow) {
    const int id = static_cast<int>(arc_row_.size());
    arc_row_.push_back(i);
    arc_col_.push_back(j);
    arc_flow_.push_back(flow);
    adjacency_[i].push_back(id);
    adjacency_[n_ + j].push_back(id);
  }

  double cost_at(int i, int j) const { return cost_[static_cast<std::size_t>(i) * m_ + j]; }

  // BFS from `root` over the current basis tree, confined to the component
  // not containing `blocked` (pass -1 for a full rebuild from node 0).
  void rebuild_subtree(int root, int blocked) {
    ++tree_stamp_;
    bfs_order_.clear();
    bfs_order_.push_back(root);
    visit_stamp_[root] = tree_stamp_;
    if (blocked >= 0) visit_stamp_[blocked] = tree_stamp_;
    for (std::size_t head = 0; head < bfs_order_.size(); ++head) {
      const int v = bfs_order_[head];
      for (int id : adjacency_[v]) {
        const int other = (v == arc_row_[id]) ? n_ + arc_col_[id] : arc_row_[id];
        if (visit_stamp_[other] == tree_stamp_) continue;
        visit_stamp_[other] = tree_stamp_;
        parent_[other] = v;
        parent_arc_[other] = id;
        depth_[other] = depth_[v] + 1;
        dual_[other] = cost_at(arc_row_[id], arc_col_[id]) - dual_[v];
        bfs_order_.push_back(other);
      }
    }
  }

  void rebuild_tree() {
    parent_[0] = -1;
    parent_arc_[0] = -1;
    depth_[0] = 0;
    dual_[0] = 0.0;
    rebuild_subtree(0, -1);
  }

  bool price(double tol, bool bland, int& out_i, int& out_j) const {
    const long long total = static_cast<long long>(n_) * m_;
    if (bland) {
      for (int i = 0; i < n_; ++i) {
        const double* row = cost_.data() + static_cast<std::size_t>(i) * m_;
        const double ui = dual_[i];
        for (int j = 0; j < m_; ++j) {
          if (row[j] - ui - dual_[n_ + j] < -tol) {
            out_i = i;
            out_j = j;
            return true;
          }
        }
      }
      return false;
    }
    const double* vj = dual_.data() + n_;
    long long scanned = 0;
    long long pos = cursor_;
    while (scanned < total) {
      double best = -tol;
      long long best_pos = -1;
      long long remaining = std::min(static_cast<long long>(block_size_), total - scanned);
      scanned += remaining;
      while (remaining > 0) {
        const int i = static_cast<int>(pos / m_);
        const int j0 = static_cast<int>(pos % m_);
        const int chunk = static_cast<int>(std::min<long long>(remaining, m_ - j0));
        const double* row = cost_.data() + static_cast<std::size_t>(i) * m_;
        const double ui = dual_[i];
        for (int j = j0; j < j0 + chunk; ++j) {
          const double rc = row[j] - ui - vj[j];
          if (rc < best) {  // strict: first (lowest scan position) wins ties
            best = rc;
            best_pos = static_cast<long long>(i) * m_ + j;
          }
        }
        pos += chunk;
        if (pos >= total) pos = 0;
        remaining -= chunk;
      }
      if (best_pos >= 0) {
        cursor_ = pos;
        out_i = static_cast<int>(best_pos / m_);
        out_j = static_cast<int>(best_pos % m_);
        return true;
      }
    }
    return false;
  }

  // Brings arc (ei, ej) into the basis; returns true on a degenerate pivot.
  bool pivot(int ei, int ej) {
    // Cycle: entering arc plus the tree path between its endpoints. Walking
    // the path from the row endpoint, arcs at even positions lose flow.
    path_arcs_.clear();
    path_sign_.clear();
    int a = ei, b = n_ + ej;
    std::vector<int>&fwd = scratch_fwd_, &bwd = scratch_bwd_;
    fwd.clear();
    bwd.clear();
    while (depth_[a] > depth_[b]) {
      fwd.push_back(parent_arc_[a]);
      a = parent_[a];
    }
    while (depth_[b] > depth_[a]) {
      bwd.push_back(parent_arc_[b]);
      b = parent_[b];
    }
    while (a != b) {
      fwd.push_back(parent_arc_[a]);
      a = parent_[a];
      bwd.push_back(parent_arc_[b]);
      b = parent_[b];
    }
    for (int id : fwd) path_arcs_.push_back(id);
    for (auto it = bwd.rbegin(); it != bwd.rend(); ++it) path_arcs_.push_back(*it);
    path_sign_.resize(path_arcs_.size());
    for (std::size_t t = 0; t < path_arcs_.size(); ++t) path_sign_[t] = (t % 2 == 0) ? -1 : +1;

    double theta = std::numeric_limits<double>::infinity();
    int leaving = -1;
    std::size_t leaving_pos = 0;
    for (std::size_t t = 0; t < path_arcs_.size(); ++t) {
      if (path_sign_[t] != -1) continue;
      const int id = path_arcs_[t];
      const double f = arc_flow_[id];
      if (f < theta ||
          (f == theta && leaving >= 0 &&
           std::make_pair(arc_row_[id], arc_col_[id]) <
               std::make_pair(arc_row_[leaving], arc_col_[leaving]))) {
        theta = f;
        leaving = id;
        leaving_pos = t;
      }
    }
    if (leaving < 0) throw std::runtime_error("solve_exact_ot: unbounded pivot");

    for (std::size_t t = 0; t < path_arcs_.size(); ++t)
      arc_flow_[path_arcs_[t]] += path_sign_[t] * theta;
    arc_flow_[leaving] = 0.0;

    // Reuse the leaving arc's slot for the entering arc.
    detach_arc(leaving);
    arc_row_[leaving] = ei;
    arc_col_[leaving] = ej;
    arc_flow_[leaving] = theta;
    adjacency_[ei].push_back(leaving);
    adjacency_[n_ + ej].push_back(leaving);

    // Removing the leaving arc splits off the subtree T2 away from the root;
    // the entering arc reattaches it, so only T2 needs new parents and duals.
    // The entering endpoint inside T2 is on the leaving arc's side of the
    // cycle walk: fwd arcs hang below ei, bwd arcs below n+ej.
    const int inside = (leaving_pos < fwd.size()) ? ei : n_ + ej;
    const int outside = (inside == ei) ? n_ + ej : ei;
    parent_[inside] = outside;
    parent_arc_[inside] = leaving;  // slot now holds the entering arc
    depth_[inside] = depth_[outside] + 1;
    dual_[inside] = cost_at(ei, ej) - dual_[outside];
    rebuild_subtree(inside, outside);
    return theta <= eps_ * 0.5;
  }

  void detach_arc(int id) {
    auto& ra = adjacency_[arc_row_[id]];
    ra.erase(std::find(ra.begin(), ra.end(), id));
    auto& ca = adjacency_[n_ + arc_col_[id]];
    ca.erase(std::find(ca.begin(), ca.end(), id));
  }

  std::vector<double> cost_;  // row-major copy
  int n_, m_, nodes_;
  std::vector<double> supply_, demand_;
  double eps_ = 0.0;
  int block_size_ = 256;
  mutable long long cursor_ = 0;

  std::vector<int> arc_row_, arc_col_;
  std::vector<double> arc_flow_;
  std::vector<std::vector<int>> adjacency_;
  std::vector<int> parent_, parent_arc_, depth_, bfs_order_;
  std::vector<double> dual_;
  std::vector<long long> visit_stamp_;
  long long tree_stamp_ = 0;
  std::vector<int> path_arcs_, scratch_fwd_, scratch_bwd_;
  std::vector<int> path_sign_;
};

}  // namespace

CostMatrix cost_matrix(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                       const StiefelPoint* projection, double p) {
  if (x.cols() != y.cols()) throw InvalidInputError("cost_matrix: ambient dimension mismatch");
  if (x.rows() < 1 || y.rows() < 1) throw InvalidInputError("cost_matrix: empty point set");
  if (!(p >= 1.0)) throw InvalidInputError("cost_matrix: order p must be >= 1");
  Eigen::MatrixXd xp, yp;
  const Eigen::MatrixXd *px = &x, *py = &y;
  if (projection != nullptr) {
    if (projection->rows() != x.cols())
      throw InvalidInputError("cost_matrix: projection dimension mismatch");
    xp = x * projection->matrix();
    yp = y * projection->matrix();
    px = &xp;
    py = &yp;
  }
  const Eigen::Index n = px->rows(), m = py->rows();
  CostMatrix out;
  out.values.resize(n, m);
  // ||a - b||^2 = ||a||^2 + ||b||^2 - 2 a.b, then clamp tiny negatives
  const Eigen::VectorXd xs = px->rowwise().squaredNorm();
  const Eigen::VectorXd ys = py->rowwise().squaredNorm();
  out.values = xs.replicate(1, m) + ys.transpose().replicate(n, 1) - 2.0 * (*px) * py->transpose();
  out.values = out.values.cwiseMax(0.0);
  if (p == 2.0) return out;
  out.values = out.values.cwiseSqrt();
  if (p == 1.0) return out;
  out.values = out.values.array().pow(p).matrix();
  return out;
}

Eigen::MatrixXd TransportPlan::dense() const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows(), cols());
  for (const PlanEntry& e : entries) out(e.row, e.col) += e.mass;
  return out;
}

OtSolution solve_exact_ot(const CostMatrix& cost, const Eigen::VectorXd& r,
                          const Eigen::VectorXd& c) {
  if (cost.values.rows() != r.size() || cost.values.cols() != c.size())
    throw InvalidInputError("solve_exact_ot: marginal sizes do not match the cost matrix");
  check_marginal(r, "solve_exact_ot r");
  check_marginal(c, "solve_exact_ot c");
  if (!cost.values.allFinite() || cost.values.minCoeff() < 0.0)
    throw InvalidInputError("solve_exact_ot: cost entries must be finite and nonnegative");
  if (std::abs(r.sum() - c.sum()) > kMarginalTol)
    throw InfeasibleMarginalsError("solve_exact_ot: marginal sums differ by more than 1e-9");

  TransportSimplex simplex(cost.values, r, c);
  simplex.run();
  return simplex.extract(r, c);
}

SinkhornResult sinkhorn(const CostMatrix& cost, const Eigen::VectorXd& r,
                        const Eigen::VectorXd& c, double reg, double tol, int max_iter) {
  if (!(reg > 0.0)) throw InvalidInputError("sinkhorn: reg must be positive");
  if (cost.values.rows() != r.size() || cost.values.cols() != c.size())
    throw InvalidInputError("sinkhorn: marginal sizes do not match the cost matrix");
  check_marginal(r, "sinkhorn r");
  check_marginal(c, "sinkhorn c");
  if (std::abs(r.sum() - c.sum()) > kMarginalTol)
    throw InfeasibleMarginalsError("sinkhorn: marginal sums differ by more than 1e-9");

  const Eigen::Index n = r.size(), m = c.size();
  const double floor_w = 1e-300;
  Eigen::VectorXd log_r(n), log_c(m);
  for (Eigen::Index i = 0; i < n; ++i) log_r(i) = std::log(std::max(r(i), floor_w));
  for (Eigen::Index j = 0; j < m; ++j) log_c(j) = std::log(std::max(c(j), floor_w));

  Eigen::VectorXd f = Eigen::VectorXd::Zero(n), g = Eigen::VectorXd::Zero(m);
  const Eigen::MatrixXd& cm = cost.values;

  auto row_lse = [&](Eigen::VectorXd& out) {
    for (Eigen::Index i = 0; i < n; ++i) {
      double mx = -std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < m; ++j) mx = std::max(mx, (f(i) + g(j) - cm(i, j)) / reg);
      double s = 0.0;
      for (Eigen::Index j = 0; j < m; ++j) s += std::exp((f(i) + g(j) - cm(i, j)) / reg - mx);
      out(i) = mx + std::log(s);
    }
  };
  auto col_lse = [&](Eigen::VectorXd& out) {
    for (Eigen::Index j = 0; j < m; ++j) {
      double mx = -std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < n; ++i) mx = std::max(mx, (f(i) + g(j) - cm(i, j)) / reg);
      double s = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) s += std::exp((f(i) + g(j) - cm(i, j)) / reg - mx);
      out(j) = mx + std::log(s);
    }
  };

  SinkhornResult result;
  Eigen::VectorXd lse_n(n), lse_m(m);
  int it = 0;
  for (; it < max_iter; ++it) {
    row_lse(lse_n);
    f += reg * (log_r - lse_n);
    col_lse(lse_m);
    g += reg * (log_c - lse_m);
    // marginal violation of the current plan
    row_lse(lse_n);
    double err = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) err += std::abs(std::exp(lse_n(i)) - r(i));
    if (err <= tol) {
      result.converged = true;
      ++it;
      break;
    }
  }
  result.iterations = it;

  TransportPlan plan;
  plan.row_marginal = r;
  plan.col_marginal = c;
  long double value = 0.0L;
  plan.entries.reserve(static_cast<std::size_t>(n) * m);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < m; ++j) {
      const double mass = std::exp((f(i) + g(j) - cm(i, j)) / reg);
      plan.entries.push_back({static_cast<int>(i), static_cast<int>(j), mass});
      value += static_cast<long double>(mass) * cm(i, j);
    }
  result.plan = std::move(plan);
  result.value = static_cast<double>(value);
  return result;
}

double wasserstein_p(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p,
                     const StiefelPoint* projection) {
  if (mu.dim() != nu.dim()) throw InvalidInputError("wasserstein_p: ambient dimension mismatch");
  const CostMatrix cost = cost_matrix(mu.atoms(), nu.atoms(), projection, p);
  const OtSolution sol = solve_exact_ot(cost, mu.weights(), nu.weights());
  return std::pow(std::max(sol.value, 0.0), 1.0 / p);
}

double wasserstein_1d_pth(const Eigen::Ref<const Eigen::VectorXd>& xs,
                          const Eigen::Ref<const Eigen::VectorXd>& wx,
                          const Eigen::Ref<const Eigen::VectorXd>& ys,
                          const Eigen::Ref<const Eigen::VectorXd>& wy, double p,
                          std::vector<PlanEntry>* plan_entries) {
  const Eigen::Index n = xs.size(), m = ys.size();
  if (n < 1 || m < 1 || wx.size() != n || wy.size() != m)
    throw InvalidInputError("wasserstein_1d: size mismatch");
  check_marginal(wx, "wasserstein_1d wx");
  check_marginal(wy, "wasserstein_1d wy");
  if (std::abs(wx.sum() - 1.0) > kMarginalTol || std::abs(wy.sum() - 1.0) > kMarginalTol)
    throw InvalidInputError("wasserstein_1d: weights must sum to 1");
  if (!(p >= 1.0)) throw InvalidInputError("wasserstein_1d: order p must be >= 1");

  std::vector<int> ox(n), oy(m);
  std::iota(ox.begin(), ox.end(), 0);
  std::iota(oy.begin(), oy.end(), 0);
  std::sort(ox.begin(), ox.end(), [&](int a, int b) { return xs(a) < xs(b); });
  std::sort(oy.begin(), oy.end(), [&](int a, int b) { return ys(a) < ys(b); });

  long double acc = 0.0L;
  Eigen::Index i = 0, j = 0;
  double wa = wx(ox[0]), wb = wy(oy[0]);
  while (i < n && j < m) {
    const double t = std::min(wa, wb);
    if (t > 0.0) {
      acc += static_cast<long double>(t) * power_cost(std::abs(xs(ox[i]) - ys(oy[j])), p);
      if (plan_entries != nullptr) plan_entries->push_back({ox[i], oy[j], t});
    }
    wa -= t;
    wb -= t;
    if (wa <= 0.0) {
      ++i;
      if (i < n) wa = wx(ox[i]);
    }
    if (wb <= 0.0) {
      ++j;
      if (j < m) wb = wy(oy[j]);
    }
  }
  return static_cast<double>(acc);
}

double wasserstein_1d(const Eigen::Ref<const Eigen::VectorXd>& xs,
                      const Eigen::Ref<const Eigen::VectorXd>& wx,
                      const Eigen::Ref<const Eigen::VectorXd>& ys,
                      const Eigen::Ref<const Eigen::VectorXd>& wy, double p) {
  return std::pow(std::max(wasserstein_1d_pth(xs, wx, ys, wy, p), 0.0), 1.0 / p);
}

double PiecewiseLinearFn::operator()(double x) const {
  const Eigen::Index n = breakpoints.size();
  if (n == 1) return values(0);
  if (x <= breakpoints(0)) return values(0);
  if (x >= breakpoints(n - 1)) return values(n - 1);
  const double* begin = breakpoints.data();
  const Eigen::Index hi = std::upper_bound(begin, begin + n, x) - begin;
  const Eigen::Index lo = hi - 1;
  const double span = breakpoints(hi) - breakpoints(lo);
  const double lambda = (x - breakpoints(lo)) / span;
  return (1.0 - lambda) * values(lo) + lambda * values(hi);
}

double PiecewiseLinearFn::slope_at(double x) const {
  const Eigen::Index n = breakpoints.size();
  if (n == 1 || x <= breakpoints(0) || x >= breakpoints(n - 1)) return 0.0;
  const double* begin = breakpoints.data();
  const Eigen::Index hi = std::upper_bound(begin, begin + n, x) - begin;
  const Eigen::Index lo = hi - 1;
  return (values(hi) - values(lo)) / (breakpoints(hi) - breakpoints(lo));
}

Eigen::VectorXd quantile_positions(const Eigen::Ref<const Eigen::VectorXd>& sorted_weights) {
  const Eigen::Index n = sorted_weights.size();
  Eigen::VectorXd pos(n);
  double cum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double denom = 1.0 - sorted_weights(i);
    pos(i) = (denom > 0.0) ? std::min(cum / denom, 1.0) : 0.0;
    cum += sorted_weights(i);
  }
  if (n > 1) pos(n - 1) = 1.0;
  return pos;
}

namespace {

struct SortedSample {
  Eigen::VectorXd values;
  Eigen::VectorXd weights;
};

SortedSample sort_and_filter(const Eigen::Ref<const Eigen::VectorXd>& samples,
                             const Eigen::Ref<const Eigen::VectorXd>& weights, bool merge_ties) {
  const Eigen::Index n = samples.size();
  if (n < 1 || weights.size() != n) throw InvalidInputError("interp: empty input or size mismatch");
  check_marginal(weights, "interp weights");
  if (std::abs(weights.sum() - 1.0) > kMarginalTol)
    throw InvalidInputError("interp: weights must sum to 1");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return samples(a) < samples(b); });

  std::vector<double> vs, ws;
  vs.reserve(n);
  ws.reserve(n);
  for (int idx : order) {
    const double w = weights(idx);
    if (w <= 0.0) continue;
    if (merge_ties && !vs.empty() && samples(idx) == vs.back())
      ws.back() += w;
    else {
      vs.push_back(samples(idx));
      ws.push_back(w);
    }
  }
  if (vs.empty()) throw InvalidInputError("interp: all weights are zero");
  SortedSample out;
  out.values = Eigen::Map<Eigen::VectorXd>(vs.data(), static_cast<Eigen::Index>(vs.size()));
  out.weights = Eigen::Map<Eigen::VectorXd>(ws.data(), static_cast<Eigen::Index>(ws.size()));
  return out;
}

}  // namespace

PiecewiseLinearFn interp_quantile(const Eigen::Ref<const Eigen::VectorXd>& samples,
                                  const Eigen::Ref<const Eigen::VectorXd>& weights) {
  const SortedSample s = sort_and_filter(samples, weights, /*merge_ties=*/false);
  if (s.values.size() == 1 || s.values(0) == s.values(s.values.size() - 1)) {
    PiecewiseLinearFn fn;
    fn.breakpoints = Eigen::VectorXd::Constant(1, 0.5);
    fn.values = Eigen::VectorXd::Constant(1, s.values(0));
    return fn;
  }
  PiecewiseLinearFn fn;
  fn.breakpoints = quantile_positions(s.weights);
  fn.values = s.values;
  return fn;
}

PiecewiseLinearFn interp_cdf(const Eigen::Ref<const Eigen::VectorXd>& samples,
                             const Eigen::Ref<const Eigen::VectorXd>& weights) {
  const SortedSample s = sort_and_filter(samples, weights, /*merge_ties=*/true);
  if (s.values.size() == 1) {
    PiecewiseLinearFn fn;
    fn.breakpoints = Eigen::VectorXd::Constant(1, s.values(0));
    fn.values = Eigen::VectorXd::Constant(1, 0.5);
    return fn;
  }
  PiecewiseLinearFn fn;
  fn.breakpoints = s.values;
  fn.values = quantile_positions(s.weights);
  return fn;
}

}  // namespace prw
