#include <doctest.h>

#include <random>

#include "liftlab/linalg.hpp"

using namespace liftlab;

namespace {

using Dense = std::vector<std::vector<mpq_class>>;

// Textbook dense Gauss-Jordan rank, written separately from the sparse code.
int dense_rank(Dense m) {
  int rank = 0;
  std::size_t rows = m.size();
  std::size_t cols = rows == 0 ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && static_cast<std::size_t>(rank) < rows; ++c) {
    std::size_t r = static_cast<std::size_t>(rank);
    std::size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[r], m[p]);
    for (std::size_t k = 0; k < rows; ++k) {
      if (k == r || m[k][c] == 0) continue;
      mpq_class f = m[k][c] / m[r][c];
      for (std::size_t j = 0; j < cols; ++j) m[k][j] -= f * m[r][j];
    }
    ++rank;
  }
  return rank;
}

SparseVec to_sparse(const std::vector<mpq_class>& row) {
  SparseVec v;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (row[j] != 0) v.emplace_back(j, GaussianRational(row[j]));
  }
  return v;
}

GaussianRational dot(const std::vector<mpq_class>& row, const SparseVec& x) {
  GaussianRational s;
  for (const auto& [j, c] : x) s += GaussianRational(row[j]) * c;
  return s;
}

Dense random_matrix(std::mt19937& rng, std::size_t rows, std::size_t cols) {
  std::uniform_int_distribution<int> val(-2, 2);
  Dense m(rows, std::vector<mpq_class>(cols));
  for (auto& r : m) {
    for (auto& e : r) e = rng() % 3 == 0 ? val(rng) : 0;
  }
  // Force some dependent rows.
  if (rows > 2) {
    for (std::size_t j = 0; j < cols; ++j) m[rows - 1][j] = m[0][j] * 2 - m[1][j];
  }
  return m;
}

}  // namespace

TEST_CASE("rank and nullspace agree with a dense elimination") {
  std::mt19937 rng(21);
  for (int n = 0; n < 150; ++n) {
    std::size_t rows = 1 + rng() % 6;
    std::size_t cols = 1 + rng() % 7;
    Dense m = random_matrix(rng, rows, cols);
    Echelon e(cols);
    for (const auto& r : m) e.insert(to_sparse(r));
    CHECK(static_cast<int>(e.rank()) == dense_rank(m));
    auto ns = e.nullspace();
    CHECK(ns.size() == cols - e.rank());
    for (const auto& x : ns) {
      for (const auto& r : m) CHECK(dot(r, x).is_zero());
    }
  }
}

TEST_CASE("augmented solve") {
  std::mt19937 rng(22);
  for (int n = 0; n < 150; ++n) {
    std::size_t rows = 1 + rng() % 5;
    std::size_t cols = 1 + rng() % 5;
    Dense m = random_matrix(rng, rows, cols);
    std::vector<mpq_class> x0(cols);
    for (auto& v : x0) v = static_cast<long>(rng() % 5) - 2;
    Echelon e(cols + 1);
    for (const auto& r : m) {
      mpq_class b = 0;
      for (std::size_t j = 0; j < cols; ++j) b += r[j] * x0[j];
      auto row = r;
      row.push_back(b);
      e.insert(to_sparse(row));
    }
    auto x = e.solve(cols);
    REQUIRE(x.has_value());
    for (const auto& r : m) {
      mpq_class b = 0;
      for (std::size_t j = 0; j < cols; ++j) b += r[j] * x0[j];
      CHECK(dot(r, *x) == GaussianRational(b));
    }
  }
  Echelon bad(2);
  bad.insert({{0, 1}, {1, 1}});
  bad.insert({{0, 1}, {1, 2}});
  CHECK_FALSE(bad.solve(1).has_value());
}

TEST_CASE("tracked span membership") {
  TrackedEchelon t;
  CHECK(t.insert({{0, 1}, {2, 1}}));
  CHECK(t.insert({{1, 1}, {2, -1}}));
  CHECK_FALSE(t.insert({{0, 2}, {1, 2}}));
  auto c = t.express({{0, 3}, {1, -1}, {2, 4}});
  REQUIRE(c.has_value());
  CHECK(entry(*c, 0) == GaussianRational(3));
  CHECK(entry(*c, 1) == GaussianRational(-1));
  CHECK_FALSE(t.express({{2, 1}}).has_value());
}

TEST_CASE("generic rank treats parameters generically") {
  ExpPoly a = sym("A");
  CHECK(generic_rank({{1, a}, {a, a * a}}) == 1);
  CHECK(generic_rank({{1, a}, {a, 1}}) == 2);
  CHECK(generic_rank({{X(), Y()}, {X() * Y(), Y() * Y()}}) == 1);
  CHECK(generic_rank({{0, 0}, {0, 0}}) == 0);
}
