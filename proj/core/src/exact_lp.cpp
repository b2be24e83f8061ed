#include "hbl/polytope.hpp"

namespace hbl {

std::optional<std::vector<Rat>> convex_weights(const std::vector<ExponentVector>& points, const ExponentVector& target) {
  const std::size_t K = points.size();
  const std::size_t m = target.size();
  if (K == 0) return std::nullopt;
  for (const auto& p : points)
    if (p.size() != m) throw DimensionMismatch("convex_weights: point dimension differs from target");

  // Rows: sum_k lambda_k p_k[j] = target[j], then sum_k lambda_k = 1.
  // Columns: lambda (K), artificials (m + 1), rhs.
  const std::size_t rows = m + 1;
  const std::size_t cols = K + rows + 1;
  std::vector<std::vector<Rat>> tab(rows + 1, std::vector<Rat>(cols));
  for (std::size_t j = 0; j < rows; ++j) {
    for (std::size_t k = 0; k < K; ++k) tab[j][k] = j < m ? points[k][j] : Rat(1);
    tab[j][cols - 1] = j < m ? target[j] : Rat(1);
    if (sgn(tab[j][cols - 1]) < 0) {
      for (std::size_t k = 0; k < K; ++k) tab[j][k] = -tab[j][k];
      tab[j][cols - 1] = -tab[j][cols - 1];
    }
    tab[j][K + j] = 1;
  }
  std::vector<std::size_t> basis(rows);
  for (std::size_t j = 0; j < rows; ++j) basis[j] = K + j;
  // Objective row holds reduced costs of minimizing the artificial sum.
  std::vector<Rat>& obj = tab[rows];
  for (std::size_t c = 0; c < cols; ++c) {
    if (c >= K && c < K + rows) continue;
    for (std::size_t j = 0; j < rows; ++j) obj[c] -= tab[j][c];
  }

  while (true) {
    // Bland: lowest-index column with negative reduced cost.
    std::size_t enter = cols;
    for (std::size_t c = 0; c + 1 < cols; ++c)
      if (sgn(obj[c]) < 0) {
        enter = c;
        break;
      }
    if (enter == cols) break;
    std::size_t leave = rows;
    Rat best;
    for (std::size_t j = 0; j < rows; ++j) {
      if (sgn(tab[j][enter]) <= 0) continue;
      Rat ratio = tab[j][cols - 1] / tab[j][enter];
      if (leave == rows || ratio < best || (ratio == best && basis[j] < basis[leave])) {
        best = ratio;
        leave = j;
      }
    }
    if (leave == rows) break;  // unbounded cannot happen for phase one
    const Rat inv = 1 / tab[leave][enter];
    for (auto& x : tab[leave]) x *= inv;
    for (std::size_t j = 0; j <= rows; ++j) {
      if (j == leave || sgn(tab[j][enter]) == 0) continue;
      const Rat f = tab[j][enter];
      for (std::size_t c = 0; c < cols; ++c) tab[j][c] -= f * tab[leave][c];
    }
    basis[leave] = enter;
  }
  if (sgn(obj[cols - 1]) != 0) return std::nullopt;

  std::vector<Rat> lambda(K);
  for (std::size_t j = 0; j < rows; ++j)
    if (basis[j] < K) lambda[basis[j]] = tab[j][cols - 1];
  // Exact re-check of the returned combination.
  Rat total = 0;
  for (const auto& l : lambda) total += l;
  if (total != 1) return std::nullopt;
  for (std::size_t j = 0; j < m; ++j) {
    Rat s = 0;
    for (std::size_t k = 0; k < K; ++k) s += lambda[k] * points[k][j];
    if (s != target[j]) return std::nullopt;
  }
  return lambda;
}

}  // namespace hbl
