#pragma once

#include <functional>
#include <map>
#include <vector>

#include "mtop/qvertex/transfer.hpp"
#include "mtop/symfun/partition.hpp"

namespace mtop::qvertex {

using symfun::Partition;

// Determinant of a square array of mutually commuting Laurent operators
// (Laplace expansion along rows, memoized on the used column set).
inline QOperator det_commuting(const std::vector<std::vector<QOperator>>& a, int dim) {
  const std::size_t n = a.size();
  if (n == 0) return identity_op(dim);
  std::map<unsigned, QOperator> memo;
  std::function<QOperator(std::size_t, unsigned)> rec = [&](std::size_t row, unsigned used) {
    if (row == n) return identity_op(dim);
    if (auto it = memo.find(used); it != memo.end()) return it->second;
    QOperator sum;
    int sign = 1;
    for (std::size_t col = 0; col < n; ++col) {
      if (used & (1u << col)) continue;
      if (!a[row][col].is_zero()) {
        QOperator term = a[row][col] * rec(row + 1, used | (1u << col));
        if (sign < 0) sum -= term; else sum += term;
      }
      sign = -sign;
    }
    memo.emplace(used, sum);
    return sum;
  };
  return rec(0, 0u);
}

struct CbrResult {
  QOperator op;
  double division_residual = 0.0;
};

// Supplies the unshifted T^a (columns) or T_s (rows); indices outside the
// family must return the zero operator.
using FamilySupplier = std::function<QOperator(int)>;

// T^lambda = det T^{lambda'_i - i + j}(u + j - 1) / prod_{k=1}^{lambda_1 - 1} T^empty(u + k).
inline CbrResult cbr_from_cols(const ModelConfig& cfg, const Partition& lambda,
                               const FamilySupplier& column, double tol = 1e-10) {
  if (lambda.empty()) return {times_identity(t_empty(cfg), cfg.dim()), 0.0};
  const Partition c = symfun::conjugate(lambda);
  const int n = c.length();
  std::vector<std::vector<QOperator>> a(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      a[static_cast<std::size_t>(i)].push_back(column(c[i] - i + j).shift(cplx(j), cfg.gamma));
  CbrResult out;
  const QOperator num = det_commuting(a, cfg.dim());
  BinomialProduct den;
  for (int k = 1; k < n; ++k) den *= t_empty_factors(cfg).shifted(cplx(k), cfg.gamma);
  out.op = divide_exact(num, den, tol, &out.division_residual);
  return out;
}

// T^lambda = det T_{lambda_i - i + j}(u - j + 1) / prod_{k=1}^{lambda'_1 - 1} T^empty(u - k).
inline CbrResult cbr_from_rows(const ModelConfig& cfg, const Partition& lambda,
                               const FamilySupplier& row, double tol = 1e-10) {
  if (lambda.empty()) return {times_identity(t_empty(cfg), cfg.dim()), 0.0};
  const int n = lambda.length();
  std::vector<std::vector<QOperator>> a(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      a[static_cast<std::size_t>(i)].push_back(row(lambda[i] - i + j).shift(-cplx(j), cfg.gamma));
  CbrResult out;
  const QOperator num = det_commuting(a, cfg.dim());
  BinomialProduct den;
  for (int k = 1; k < n; ++k) den *= t_empty_factors(cfg).shifted(-cplx(k), cfg.gamma);
  out.op = divide_exact(num, den, tol, &out.division_residual);
  return out;
}

// Column family T^0 = T^empty, T^1..T^N by fusion, zero elsewhere.
struct ColumnFamily {
  std::vector<ColumnTransfer> cols;

  ColumnFamily(const ModelConfig& cfg, FusionConvention conv = {}, double tol = 1e-10) {
    for (int a = 0; a <= cfg.N; ++a) cols.push_back(transfer_column(cfg, a, conv, tol));
  }
  QOperator operator()(int a) const {
    if (a < 0 || a >= static_cast<int>(cols.size())) return QOperator();
    return cols[static_cast<std::size_t>(a)].op;
  }
};

// Row family T_0 = T^empty, T_1..T_max from the spin-s representation (N = 2).
struct SpinRowFamily {
  std::vector<QOperator> rows;

  SpinRowFamily(const ModelConfig& cfg, int max_s) {
    rows.push_back(times_identity(t_empty(cfg), cfg.dim()));
    for (int s = 1; s <= max_s; ++s) rows.push_back(transfer_onerow_spin(cfg, s));
  }
  QOperator operator()(int s) const {
    if (s < 0) return QOperator();
    if (s >= static_cast<int>(rows.size())) throw ConfigError("spin row family built only up to s = " + std::to_string(rows.size() - 1));
    return rows[static_cast<std::size_t>(s)];
  }
};

}  // namespace mtop::qvertex
