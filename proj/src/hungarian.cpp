#include "adaptrack/hungarian.hpp"

#include <limits>

namespace adaptrack {

namespace {

constexpr double kForbidden = 1e9;

// Square min-cost perfect matching via potentials, O(n^3).
std::vector<int> solve_square(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);

  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = -1;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }

  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

}  // namespace

std::vector<int> max_score_assignment(const Eigen::MatrixXd& score, double gate) {
  const int rows = static_cast<int>(score.rows());
  const int cols = static_cast<int>(score.cols());
  std::vector<int> result(rows, -1);
  if (rows == 0 || cols == 0) return result;

  // Padded square problem: dummy columns absorb unmatched rows and dummy rows
  // absorb unmatched columns, both at zero cost. Real pairs below the gate are
  // forbidden outright.
  const int n = rows + cols;
  const double tie_eps =
      1e-9 / (static_cast<double>(rows) * cols * std::min(rows, cols) + 1.0);

  Eigen::MatrixXd cost = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      if (score(i, j) >= gate) {
        const double bonus = tie_eps * (rows - i) * (cols - j);
        cost(i, j) = -(score(i, j) + bonus);
      } else {
        cost(i, j) = kForbidden;
      }
    }
  }

  const std::vector<int> assignment = solve_square(cost);
  for (int i = 0; i < rows; ++i)
    if (assignment[i] < cols) result[i] = assignment[i];
  return result;
}

}  // namespace adaptrack
