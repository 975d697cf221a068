#include "pqi/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <stdexcept>

#include "pqi/error.hpp"

namespace pqi {

void SparseMatrix::add_column(
    const std::vector<std::pair<int, double>>& entries) {
  if (col_start.empty()) col_start.push_back(0);
  for (const auto& [r, v] : entries) {
    row_index.push_back(r);
    value.push_back(v);
  }
  col_start.push_back(static_cast<int>(row_index.size()));
  cols = static_cast<int>(col_start.size()) - 1;
}

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kDropTol = 1e-12;

struct Eta {
  int pivot_pos;
  double pivot_value;                          // w[pivot_pos]
  std::vector<std::pair<int, double>> others;  // (pos, w[pos]), pos != pivot
};

// Sparse LU of the basis matrix with partial pivoting. Basis columns are
// processed in position order; `pos_of_row[r]` maps an original row to
// its permuted position. Solutions of FTRAN/BTRAN are indexed by basis
// position.
class BasisLu {
 public:
  // columns[t]: sparse basis column t as (original row, value) pairs.
  // During factorization L columns store entries on not-yet-pivoted rows
  // keyed as m_ + original_row; keys resolve to positions at the end.
  void factor(int m,
              const std::vector<std::vector<std::pair<int, double>>>& columns) {
    m_ = m;
    lcol_.assign(m, {});
    ucol_.assign(m, {});
    udiag_.assign(m, 0.0);
    pos_of_row_.assign(m, -1);
    row_of_pos_.assign(m, -1);
    work_.assign(m, 0.0);           // pivoted positions
    pending_val_.assign(m, 0.0);    // unpivoted original rows
    std::vector<char> in_touched(m, 0);
    std::vector<int> touched;       // pivoted positions made nonzero
    std::vector<int> pending_rows;  // unpivoted rows made nonzero
    std::vector<int> heap;          // positions awaiting elimination

    auto heap_push = [&](int p) {
      heap.push_back(p);
      std::push_heap(heap.begin(), heap.end(), std::greater<int>());
    };

    for (int t = 0; t < m_; ++t) {
      touched.clear();
      pending_rows.clear();
      heap.clear();
      auto scatter = [&](int r, double v) {
        int p = pos_of_row_[r];
        if (p >= 0) {
          if (!in_touched[p]) {
            in_touched[p] = 1;
            touched.push_back(p);
            heap_push(p);
          }
          work_[p] += v;
        } else {
          if (pending_val_[r] == 0.0) pending_rows.push_back(r);
          pending_val_[r] += v;
        }
      };
      for (const auto& [r, v] : columns[t]) scatter(r, v);
      // Eliminate touched pivoted positions in increasing pivot order so
      // fill-in at later positions is revisited when popped.
      while (!heap.empty()) {
        std::pop_heap(heap.begin(), heap.end(), std::greater<int>());
        int i = heap.back();
        heap.pop_back();
        double wi = work_[i];
        if (wi == 0.0) continue;
        for (const auto& [key, l] : lcol_[i]) {
          if (key < m_) {
            if (!in_touched[key]) {
              in_touched[key] = 1;
              touched.push_back(key);
              heap_push(key);
            }
            work_[key] -= l * wi;
          } else {
            scatter(key - m_, -l * wi);
          }
        }
      }
      // Partial pivoting over the unpivoted rows.
      int pivot_row = -1;
      double pivot_val = 0.0;
      for (int r : pending_rows) {
        if (std::abs(pending_val_[r]) > std::abs(pivot_val)) {
          pivot_val = pending_val_[r];
          pivot_row = r;
        }
      }
      if (pivot_row < 0 || std::abs(pivot_val) < kPivotTol) {
        throw Error(Errc::IterationLimit,
                    "simplex basis numerically singular during refactorization");
      }
      pos_of_row_[pivot_row] = t;
      row_of_pos_[t] = pivot_row;
      udiag_[t] = pivot_val;
      // U column t: entries at pivoted (touched) positions, all < t.
      std::sort(touched.begin(), touched.end());
      for (int i : touched) {
        if (std::abs(work_[i]) > kDropTol) ucol_[t].emplace_back(i, work_[i]);
        work_[i] = 0.0;
        in_touched[i] = 0;
      }
      // L column t: remaining unpivoted rows, normalized by the pivot.
      std::vector<std::pair<int, double>> lc;
      for (int r : pending_rows) {
        double v = pending_val_[r];
        pending_val_[r] = 0.0;
        if (r == pivot_row) continue;
        double l = v / pivot_val;
        if (std::abs(l) > kDropTol) lc.emplace_back(m_ + r, l);
      }
      lcol_[t] = std::move(lc);
    }
    // Resolve deferred L row keys to permuted positions.
    for (int t = 0; t < m_; ++t) {
      for (auto& [key, l] : lcol_[t]) {
        if (key >= m_) key = pos_of_row_[key - m_];
      }
      std::sort(lcol_[t].begin(), lcol_[t].end());
    }
  }

  // Solve B x = a; `a` given as (original row, value) pairs; result is a
  // dense vector indexed by basis position.
  void ftran(const std::vector<std::pair<int, double>>& a,
             std::vector<double>& x) const {
    x.assign(m_, 0.0);
    for (const auto& [r, v] : a) x[pos_of_row_[r]] += v;
    // L forward solve (unit diagonal).
    for (int i = 0; i < m_; ++i) {
      double xi = x[i];
      if (xi == 0.0) continue;
      for (const auto& [j, l] : lcol_[i]) x[j] -= l * xi;
    }
    // U backward solve.
    for (int i = m_ - 1; i >= 0; --i) {
      double xi = x[i];
      if (xi == 0.0) continue;
      xi /= udiag_[i];
      x[i] = xi;
      for (const auto& [j, u] : ucol_[i]) x[j] -= u * xi;
    }
  }

  // Solve B^T z = cB; `cB` and result are indexed by basis position on
  // input; `y_by_row` returns the dual vector indexed by original row.
  void btran(std::vector<double>& z, std::vector<double>& y_by_row) const {
    // U^T forward solve.
    for (int i = 0; i < m_; ++i) {
      double zi = z[i];
      for (const auto& [j, u] : ucol_[i]) zi -= u * z[j];
      z[i] = zi / udiag_[i];
    }
    // L^T backward solve (unit diagonal): gather from the already-final
    // later positions, since lcol_[i] holds the subdiagonal of column i.
    for (int i = m_ - 1; i >= 0; --i) {
      double zi = z[i];
      for (const auto& [j, l] : lcol_[i]) zi -= l * z[j];
      z[i] = zi;
    }
    y_by_row.assign(m_, 0.0);
    for (int i = 0; i < m_; ++i) y_by_row[row_of_pos_[i]] = z[i];
  }

 private:
  int m_ = 0;
  std::vector<std::vector<std::pair<int, double>>> lcol_;
  std::vector<std::vector<std::pair<int, double>>> ucol_;
  std::vector<double> udiag_;
  std::vector<int> pos_of_row_;
  std::vector<int> row_of_pos_;
  std::vector<double> work_;
  std::vector<double> pending_val_;
};

class SimplexSolver {
 public:
  SimplexSolver(const SparseMatrix& A, const std::vector<double>& b,
                const std::vector<double>& c,
                const std::vector<int>& initial_basis,
                const SimplexOptions& opts)
      : A_(A), b_(b), c_(c), opts_(opts), m_(A.rows), n_(A.cols) {
    basis_.assign(m_, -1);
    is_basic_.assign(n_, 0);
    artificial_row_.clear();
    for (int i = 0; i < m_; ++i) {
      int j = initial_basis[i];
      if (j >= 0) {
        basis_[i] = j;
        is_basic_[j] = 1;
      } else {
        // Artificial variable, identified by n_ + its index.
        basis_[i] = n_ + static_cast<int>(artificial_row_.size());
        artificial_row_.push_back(i);
      }
    }
    xb_ = b_;  // initial basis is an identity by construction
  }

  SimplexResult run() {
    SimplexResult res;
    refactor();
    if (!artificial_row_.empty()) {
      SimplexStatus st = optimize(/*phase1=*/true);
      if (st != SimplexStatus::Optimal) {
        res.status = st;
        res.iterations = iterations_;
        return res;
      }
      double infeas = 0.0;
      for (int i = 0; i < m_; ++i) {
        if (basis_[i] >= n_) infeas += std::max(xb_[i], 0.0);
      }
      if (infeas > 1e-7) {
        res.status = SimplexStatus::Infeasible;
        res.iterations = iterations_;
        return res;
      }
    }
    SimplexStatus st = optimize(/*phase1=*/false);
    res.status = st;
    res.iterations = iterations_;
    res.x.assign(n_, 0.0);
    double obj = 0.0;
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) {
        double v = std::max(xb_[i], 0.0);
        res.x[basis_[i]] = v;
        obj += c_[basis_[i]] * v;
      }
    }
    res.objective = obj;
    return res;
  }

 private:
  double column_cost(int j, bool phase1) const {
    if (phase1) return j >= n_ ? 1.0 : 0.0;
    return j >= n_ ? 0.0 : c_[j];
  }

  void column_entries(int j, std::vector<std::pair<int, double>>& out) const {
    out.clear();
    if (j >= n_) {
      out.emplace_back(artificial_row_[j - n_], 1.0);
      return;
    }
    for (int t = A_.col_start[j]; t < A_.col_start[j + 1]; ++t) {
      out.emplace_back(A_.row_index[t], A_.value[t]);
    }
  }

  void refactor() {
    std::vector<std::vector<std::pair<int, double>>> cols(m_);
    for (int i = 0; i < m_; ++i) column_entries(basis_[i], cols[i]);
    lu_.factor(m_, cols);
    etas_.clear();
    // Recompute xb from scratch to shed accumulated drift.
    std::vector<std::pair<int, double>> rhs;
    for (int r = 0; r < m_; ++r) {
      if (b_[r] != 0.0) rhs.emplace_back(r, b_[r]);
    }
    lu_.ftran(rhs, xb_);
    for (double& v : xb_) {
      if (v < 0.0 && v > -opts_.feas_tol * 10) v = 0.0;
    }
  }

  void ftran_full(const std::vector<std::pair<int, double>>& a,
                  std::vector<double>& w) const {
    lu_.ftran(a, w);
    for (const Eta& e : etas_) {
      double wp = w[e.pivot_pos] / e.pivot_value;
      if (wp != 0.0) {
        for (const auto& [pos, v] : e.others) w[pos] -= v * wp;
      }
      w[e.pivot_pos] = wp;
    }
  }

  void btran_full(bool phase1, std::vector<double>& y) const {
    std::vector<double> z(m_);
    for (int i = 0; i < m_; ++i) z[i] = column_cost(basis_[i], phase1);
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double acc = z[it->pivot_pos];
      for (const auto& [pos, v] : it->others) acc -= v * z[pos];
      z[it->pivot_pos] = acc / it->pivot_value;
    }
    lu_.btran(z, y);
  }

  double reduced_cost(int j, bool phase1, const std::vector<double>& y) const {
    double d = column_cost(j, phase1);
    for (int t = A_.col_start[j]; t < A_.col_start[j + 1]; ++t) {
      d -= y[A_.row_index[t]] * A_.value[t];
    }
    return d;
  }

  // Returns entering column, or -1 at phase optimality.
  int price(bool phase1, bool bland, const std::vector<double>& y) const {
    int best = -1;
    double best_d = -opts_.cost_tol;
    for (int j = 0; j < n_; ++j) {
      if (is_basic_[j]) continue;
      double d = reduced_cost(j, phase1, y);
      if (d < best_d) {
        if (bland) return j;
        best_d = d;
        best = j;
      }
    }
    return best;
  }

  // Ratio test with Bland-compatible tie-breaking: smallest ratio, ties
  // broken toward artificial variables first, then smallest column id.
  int ratio_test(const std::vector<double>& w, double& theta) const {
    // A zero-valued basic artificial with a nonzero pivot element must
    // leave first, whatever the sign; otherwise it could be driven
    // positive and violate its row.
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] >= n_ && std::abs(w[i]) > kPivotTol &&
          xb_[i] <= opts_.feas_tol) {
        theta = 0.0;
        return i;
      }
    }
    int leave = -1;
    theta = 0.0;
    for (int i = 0; i < m_; ++i) {
      if (w[i] <= kPivotTol) continue;
      double ratio = std::max(xb_[i], 0.0) / w[i];
      if (leave < 0 || ratio < theta - 1e-12 ||
          (ratio < theta + 1e-12 && prefer_leaving(i, leave))) {
        leave = i;
        theta = ratio;
      }
    }
    return leave;
  }

  bool prefer_leaving(int i, int current) const {
    bool i_art = basis_[i] >= n_;
    bool c_art = basis_[current] >= n_;
    if (i_art != c_art) return i_art;
    return basis_[i] < basis_[current];
  }

  SimplexStatus optimize(bool phase1) {
    std::vector<double> y, w;
    std::vector<std::pair<int, double>> col;
    int stall = 0;
    bool bland = opts_.always_bland;
    while (true) {
      if (iterations_ >= opts_.iteration_cap) {
        return SimplexStatus::IterationLimit;
      }
      btran_full(phase1, y);
      int enter = price(phase1, bland, y);
      if (enter < 0) return SimplexStatus::Optimal;

      column_entries(enter, col);
      ftran_full(col, w);
      double theta = 0.0;
      int leave = ratio_test(w, theta);
      if (leave < 0) {
        // The LP family solved here is always bounded; treat as failure.
        return SimplexStatus::IterationLimit;
      }

      // Pivot: update basic values and record the eta.
      for (int i = 0; i < m_; ++i) {
        if (w[i] != 0.0) xb_[i] -= theta * w[i];
        if (xb_[i] < 0.0 && xb_[i] > -opts_.feas_tol * 10) xb_[i] = 0.0;
      }
      xb_[leave] = theta;
      int leaving_col = basis_[leave];
      if (leaving_col < n_) is_basic_[leaving_col] = 0;
      basis_[leave] = enter;
      is_basic_[enter] = 1;

      Eta eta;
      eta.pivot_pos = leave;
      eta.pivot_value = w[leave];
      for (int i = 0; i < m_; ++i) {
        if (i != leave && std::abs(w[i]) > kDropTol) {
          eta.others.emplace_back(i, w[i]);
        }
      }
      etas_.push_back(std::move(eta));
      ++iterations_;

      if (theta <= opts_.feas_tol) {
        if (++stall >= opts_.stall_limit) bland = true;
      } else {
        stall = 0;
        bland = opts_.always_bland;
      }
      if (static_cast<int>(etas_.size()) >= opts_.refactor_interval) {
        refactor();
      }
    }
  }

  const SparseMatrix& A_;
  const std::vector<double>& b_;
  const std::vector<double>& c_;
  SimplexOptions opts_;
  int m_;
  int n_;
  std::vector<int> basis_;
  std::vector<char> is_basic_;
  std::vector<int> artificial_row_;
  std::vector<double> xb_;
  BasisLu lu_;
  std::vector<Eta> etas_;
  long iterations_ = 0;
};

}  // namespace

SimplexResult simplex_solve(const SparseMatrix& A, const std::vector<double>& b,
                            const std::vector<double>& c,
                            const std::vector<int>& initial_basis,
                            const SimplexOptions& opts) {
  SimplexSolver solver(A, b, c, initial_basis, opts);
  return solver.run();
}

}  // namespace pqi
