#include "invforge/matrix.hpp"

namespace invforge {

RankInfo numerical_rank(std::vector<std::vector<Scalar>> rows, double rel_tol) {
  RankInfo info;
  if (rows.empty()) return info;
  const std::size_t n_cols = rows.front().size();
  for (auto& row : rows) {
    double m = 0.0;
    for (const auto& x : row) m = std::max(m, std::abs(x));
    if (m > 0.0)
      for (auto& x : row) x /= m;
  }
  double largest = 0.0;
  for (const auto& row : rows)
    for (const auto& x : row) largest = std::max(largest, std::abs(x));
  if (largest == 0.0) return info;
  const double threshold = rel_tol * largest;

  std::vector<bool> row_used(rows.size(), false);
  std::vector<bool> col_used(n_cols, false);
  while (true) {
    double best = 0.0;
    std::size_t pr = 0, pc = 0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (row_used[r]) continue;
      for (std::size_t c = 0; c < n_cols; ++c) {
        if (col_used[c]) continue;
        const double a = std::abs(rows[r][c]);
        if (a > best) {
          best = a;
          pr = r;
          pc = c;
        }
      }
    }
    if (!(best > threshold)) break;
    info.pivots.push_back(best);
    ++info.rank;
    row_used[pr] = true;
    col_used[pc] = true;
    const Scalar piv = rows[pr][pc];
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (row_used[r]) continue;
      const Scalar f = rows[r][pc] / piv;
      if (f == Scalar{}) continue;
      for (std::size_t c = 0; c < n_cols; ++c) rows[r][c] -= f * rows[pr][c];
    }
  }
  return info;
}

}  // namespace invforge
