#ifndef PQI_SIMPLEX_HPP
#define PQI_SIMPLEX_HPP

#include <vector>

namespace pqi {

/// Compressed sparse column matrix.
struct SparseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int> col_start;  // size cols + 1
  std::vector<int> row_index;
  std::vector<double> value;

  void add_column(const std::vector<std::pair<int, double>>& entries);
};

enum class SimplexStatus { Optimal, Infeasible, IterationLimit };

struct SimplexOptions {
  long iteration_cap = 1000000;
  double feas_tol = 1e-8;
  double cost_tol = 1e-8;
  int refactor_interval = 100;
  int stall_limit = 100;  // degenerate pivots before forcing Bland's rule
  bool always_bland = false;
};

struct SimplexResult {
  SimplexStatus status = SimplexStatus::Optimal;
  double objective = 0.0;
  long iterations = 0;
  std::vector<double> x;  // structural variables only
};

/// Two-phase primal revised simplex for min c'x subject to Ax = b, x >= 0,
/// with b >= 0. `initial_basis[i]`, when >= 0, names a structural column
/// that is the unit vector e_i (a slack); rows left at -1 get a phase-1
/// artificial. The basis is maintained as a sparse LU factorization with
/// product-form eta updates and periodic refactorization. Pricing is
/// Dantzig by default and falls back to Bland's rule after a degenerate
/// stall, which guarantees termination.
SimplexResult simplex_solve(const SparseMatrix& A, const std::vector<double>& b,
                            const std::vector<double>& c,
                            const std::vector<int>& initial_basis,
                            const SimplexOptions& opts = {});

}  // namespace pqi

#endif
