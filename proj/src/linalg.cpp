#include "liftlab/linalg.hpp"

#include <algorithm>

namespace liftlab {

SparseVec make_sparse(std::vector<std::pair<std::size_t, GaussianRational>> entries) {
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseVec out;
  for (auto& e : entries) {
    if (!out.empty() && out.back().first == e.first) {
      out.back().second += e.second;
    } else {
      if (!out.empty() && out.back().second.is_zero()) out.pop_back();
      out.push_back(std::move(e));
    }
  }
  if (!out.empty() && out.back().second.is_zero()) out.pop_back();
  return out;
}

SparseVec axpy(const SparseVec& a, const GaussianRational& c, const SparseVec& b) {
  if (c.is_zero() || b.empty()) return a;
  SparseVec out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, c * b[j].second);
      ++j;
    } else {
      GaussianRational s = a[i].second + c * b[j].second;
      if (!s.is_zero()) out.emplace_back(a[i].first, std::move(s));
      ++i;
      ++j;
    }
  }
  return out;
}

GaussianRational entry(const SparseVec& v, std::size_t col) {
  auto it = std::lower_bound(v.begin(), v.end(), col, [](const auto& e, std::size_t c) { return e.first < c; });
  if (it == v.end() || it->first != col) return {};
  return it->second;
}

namespace {

// Eliminates pivot columns from v starting at position `pos`; entries before
// pos are left alone.
SparseVec eliminate(SparseVec v, const std::map<std::size_t, SparseVec>& rows, std::size_t pos) {
  while (pos < v.size()) {
    auto it = rows.find(v[pos].first);
    if (it == rows.end()) {
      ++pos;
      continue;
    }
    GaussianRational c = -v[pos].second;
    v = axpy(v, c, it->second);
  }
  return v;
}

}  // namespace

SparseVec Echelon::reduce(SparseVec v) const { return eliminate(std::move(v), rows_, 0); }

bool Echelon::insert(SparseVec v) {
  v = reduce(std::move(v));
  if (v.empty()) return false;
  GaussianRational inv = v.front().second.reciprocal();
  for (auto& e : v) e.second *= inv;
  std::size_t pivot = v.front().first;
  rows_.emplace(pivot, std::move(v));
  reduced_ = false;
  return true;
}

void Echelon::make_reduced() {
  if (reduced_) return;
  // Later rows first, so each row only meets already-reduced rows.
  for (auto it = rows_.rbegin(); it != rows_.rend(); ++it) {
    it->second = eliminate(std::move(it->second), rows_, 1);
  }
  reduced_ = true;
}

std::vector<SparseVec> Echelon::nullspace() {
  make_reduced();
  // Column -> list of (pivot, value) among pivot rows, for the free columns.
  std::map<std::size_t, SparseVec> by_free;
  for (const auto& [pivot, row] : rows_) {
    for (std::size_t k = 1; k < row.size(); ++k) by_free[row[k].first].emplace_back(pivot, -row[k].second);
  }
  std::vector<SparseVec> out;
  for (std::size_t col = 0; col < ncols_; ++col) {
    if (is_pivot(col)) continue;
    SparseVec v;
    auto it = by_free.find(col);
    if (it != by_free.end()) v = it->second;
    v.emplace_back(col, GaussianRational(1));
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    out.push_back(std::move(v));
  }
  return out;
}

std::optional<SparseVec> Echelon::solve(std::size_t rhs_col) {
  if (is_pivot(rhs_col)) return std::nullopt;
  make_reduced();
  SparseVec x;
  for (const auto& [pivot, row] : rows_) {
    if (pivot > rhs_col) continue;
    GaussianRational b = entry(row, rhs_col);
    if (!b.is_zero()) x.emplace_back(pivot, b);
  }
  return x;
}

std::pair<SparseVec, SparseVec> TrackedEchelon::reduce(SparseVec v, SparseVec comb) const {
  std::size_t pos = 0;
  while (pos < v.size()) {
    auto it = rows_.find(v[pos].first);
    if (it == rows_.end()) {
      ++pos;
      continue;
    }
    GaussianRational c = -v[pos].second;
    v = axpy(v, c, it->second.vec);
    comb = axpy(comb, c, it->second.comb);
  }
  return {std::move(v), std::move(comb)};
}

bool TrackedEchelon::insert(const SparseVec& v) {
  std::size_t index = count_++;
  auto [res, comb] = reduce(v, SparseVec{{index, GaussianRational(1)}});
  if (res.empty()) return false;
  GaussianRational inv = res.front().second.reciprocal();
  for (auto& e : res) e.second *= inv;
  for (auto& e : comb) e.second *= inv;
  std::size_t pivot = res.front().first;
  rows_.emplace(pivot, Row{std::move(res), std::move(comb)});
  return true;
}

std::optional<SparseVec> TrackedEchelon::express(const SparseVec& v) const {
  auto [res, comb] = reduce(v, {});
  if (!res.empty()) return std::nullopt;
  // v - Σ comb_k v_k = 0, so the coefficients are -comb.
  for (auto& e : comb) e.second = -e.second;
  return comb;
}

int generic_rank(std::vector<std::vector<ExpPoly>> rows) {
  int rank = 0;
  if (rows.empty()) return 0;
  std::size_t ncols = 0;
  for (const auto& r : rows) ncols = std::max(ncols, r.size());
  for (auto& r : rows) r.resize(ncols);
  std::size_t top = 0;
  for (std::size_t col = 0; col < ncols && top < rows.size(); ++col) {
    std::size_t piv = top;
    // Prefer the sparsest nonzero pivot to keep entries small.
    std::size_t best = 0;
    bool found = false;
    for (std::size_t r = top; r < rows.size(); ++r) {
      if (rows[r][col].is_zero()) continue;
      if (!found || rows[r][col].size() < best) {
        piv = r;
        best = rows[r][col].size();
        found = true;
      }
    }
    if (!found) continue;
    std::swap(rows[top], rows[piv]);
    const ExpPoly a = rows[top][col];
    for (std::size_t r = top + 1; r < rows.size(); ++r) {
      if (rows[r][col].is_zero()) continue;
      ExpPoly b = rows[r][col];
      for (std::size_t k = col; k < ncols; ++k) rows[r][k] = a * rows[r][k] - b * rows[top][k];
    }
    ++top;
    ++rank;
  }
  return rank;
}

}  // namespace liftlab
