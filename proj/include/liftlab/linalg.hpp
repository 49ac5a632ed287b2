#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "liftlab/expoly.hpp"
#include "liftlab/gaussian.hpp"

namespace liftlab {

/// Sparse vector: (column, value) pairs sorted by column, no explicit zeros.
using SparseVec = std::vector<std::pair<std::size_t, GaussianRational>>;

/// Sorts and merges duplicate columns, dropping zeros.
SparseVec make_sparse(std::vector<std::pair<std::size_t, GaussianRational>> entries);
/// a + c*b
SparseVec axpy(const SparseVec& a, const GaussianRational& c, const SparseVec& b);
GaussianRational entry(const SparseVec& v, std::size_t col);

/// Incremental row echelon form over Q(i). Each stored row is scaled so its
/// pivot (leading column) is 1. Pivots are always the earliest nonzero
/// column, so later columns end up as the free ones.
class Echelon {
 public:
  explicit Echelon(std::size_t ncols) : ncols_(ncols) {}

  std::size_t ncols() const { return ncols_; }
  std::size_t rank() const { return rows_.size(); }
  const std::map<std::size_t, SparseVec>& rows() const { return rows_; }
  bool is_pivot(std::size_t col) const { return rows_.count(col) != 0; }

  /// Residual of v after eliminating every pivot column.
  SparseVec reduce(SparseVec v) const;
  /// Adds a row; returns false if it was already in the row span.
  bool insert(SparseVec v);
  /// Back-substitution to reduced row echelon form.
  void make_reduced();
  /// Basis of {x : row·x = 0 for all rows}, one vector per free column, in
  /// increasing free-column order. Requires make_reduced() first (done here).
  std::vector<SparseVec> nullspace();
  /// Treating column `rhs_col` as the right-hand side of every inserted row,
  /// returns the solution with all free unknowns set to 0, or nullopt if the
  /// system is inconsistent. Only columns < rhs_col are unknowns.
  std::optional<SparseVec> solve(std::size_t rhs_col);

 private:
  std::size_t ncols_;
  std::map<std::size_t, SparseVec> rows_;
  bool reduced_ = true;
};

/// Echelon form that remembers each row as a combination of the inserted
/// vectors, for span-membership queries with coefficients.
class TrackedEchelon {
 public:
  /// Inserts the next vector (index = number of previous inserts). Returns
  /// false if it is dependent on the earlier ones.
  bool insert(const SparseVec& v);
  /// If v lies in the span, returns coefficients over the inserted vectors.
  std::optional<SparseVec> express(const SparseVec& v) const;
  std::size_t count() const { return count_; }

 private:
  struct Row {
    SparseVec vec;
    SparseVec comb;
  };
  std::pair<SparseVec, SparseVec> reduce(SparseVec v, SparseVec comb) const;

  std::map<std::size_t, Row> rows_;
  std::size_t count_ = 0;
};

/// Rank of a matrix with ExpPoly entries over the fraction field of the
/// coefficient ring (so free parameter symbols are treated generically).
int generic_rank(std::vector<std::vector<ExpPoly>> rows);

/// Assigns dense column indices to keys in first-seen order.
template <class Key>
class Indexer {
 public:
  std::size_t operator()(const Key& k) {
    auto [it, fresh] = index_.try_emplace(k, keys_.size());
    if (fresh) keys_.push_back(k);
    return it->second;
  }
  std::optional<std::size_t> find(const Key& k) const {
    auto it = index_.find(k);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  std::size_t size() const { return keys_.size(); }
  const Key& key(std::size_t i) const { return keys_[i]; }
  const std::vector<Key>& keys() const { return keys_; }

 private:
  std::map<Key, std::size_t> index_;
  std::vector<Key> keys_;
};

}  // namespace liftlab
