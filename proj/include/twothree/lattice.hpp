#pragma once

#include "twothree/int_matrix.hpp"
#include "twothree/integer.hpp"
#include "twothree/normal_form.hpp"
#include "twothree/prime.hpp"

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace twothree {

/// A subgroup of Z^support, stored by its canonical Hermite basis. Two
/// lattices over the same support are equal iff their canonical bases match.
class Lattice {
 public:
  Lattice() = default;

  /// The subgroup generated by `vectors`; each must have |support| entries.
  static Lattice from_generators(std::vector<Prime> support,
                                 const std::vector<std::vector<Integer>>& vectors) {
    check_support(support);
    IntMatrix gens(vectors.size(), support.size());
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      if (vectors[i].size() != support.size())
        throw std::invalid_argument("generator length does not match lattice support");
      for (std::size_t j = 0; j < support.size(); ++j) gens(i, j) = vectors[i][j];
    }
    return from_matrix(std::move(support), std::move(gens));
  }

  static Lattice from_matrix(std::vector<Prime> support, IntMatrix generators) {
    check_support(support);
    if (generators.cols() != support.size())
      throw std::invalid_argument("generator matrix width does not match lattice support");
    Lattice l;
    l.support_ = std::move(support);
    HNFResult hnf = hermite_normal_form(generators);
    l.canonical_ = hnf.H.row_block(0, hnf.rank);
    l.basis_ = std::move(generators);
    return l;
  }

  static Lattice zero(std::vector<Prime> support) {
    const std::size_t n = support.size();
    return from_matrix(std::move(support), IntMatrix(0, n));
  }
  static Lattice full(std::vector<Prime> support) {
    const std::size_t n = support.size();
    return from_matrix(std::move(support), IntMatrix::identity(n));
  }

  const std::vector<Prime>& support() const { return support_; }
  std::size_t dimension() const { return support_.size(); }
  /// The generators as supplied.
  const IntMatrix& basis() const { return basis_; }
  /// Hermite basis with zero rows removed.
  const IntMatrix& canonical() const { return canonical_; }
  std::size_t rank() const { return canonical_.rows(); }

  /// Exact back-substitution against the Hermite basis.
  bool contains(const std::vector<Integer>& v) const {
    if (v.size() != support_.size())
      throw std::invalid_argument("vector length does not match lattice support");
    std::vector<Integer> residual = v;
    std::size_t col = 0;
    for (std::size_t r = 0; r < canonical_.rows(); ++r) {
      std::size_t pivot = col;
      while (canonical_(r, pivot) == 0) ++pivot;
      for (; col < pivot; ++col)
        if (residual[col] != 0) return false;
      if (residual[pivot] % canonical_(r, pivot) != 0) return false;
      Integer q = residual[pivot] / canonical_(r, pivot);
      for (std::size_t j = pivot; j < residual.size(); ++j) residual[j] -= q * canonical_(r, j);
      col = pivot + 1;
    }
    for (; col < residual.size(); ++col)
      if (residual[col] != 0) return false;
    return true;
  }

  /// this contains other; supports must agree.
  bool includes(const Lattice& other) const {
    require_same_support(other);
    for (std::size_t r = 0; r < other.canonical_.rows(); ++r)
      if (!contains(other.canonical_.row(r))) return false;
    return true;
  }

  /// Index of `p` in the support, or dimension() when absent.
  std::size_t index_of(Prime p) const {
    auto it = std::lower_bound(support_.begin(), support_.end(), p);
    if (it == support_.end() || *it != p) return support_.size();
    return static_cast<std::size_t>(it - support_.begin());
  }

  /// Projection forgetting coordinate `p`.
  Lattice drop_coordinate(Prime p) const {
    const std::size_t k = index_of(p);
    if (k == support_.size()) return *this;
    std::vector<Prime> sup;
    for (std::size_t j = 0; j < support_.size(); ++j)
      if (j != k) sup.push_back(support_[j]);
    IntMatrix g(canonical_.rows(), sup.size());
    for (std::size_t i = 0; i < canonical_.rows(); ++i)
      for (std::size_t j = 0, t = 0; j < support_.size(); ++j)
        if (j != k) g(i, t++) = canonical_(i, j);
    return from_matrix(std::move(sup), std::move(g));
  }

  /// Re-embed over a superset support. New coordinates are forced to zero
  /// (full_new = false) or left unconstrained (full_new = true).
  Lattice extend_to(const std::vector<Prime>& new_support, bool full_new) const {
    check_support(new_support);
    for (Prime p : support_)
      if (!std::binary_search(new_support.begin(), new_support.end(), p))
        throw std::invalid_argument("extension support must contain the original support");
    std::vector<std::size_t> where(support_.size());
    for (std::size_t j = 0; j < support_.size(); ++j)
      where[j] = static_cast<std::size_t>(
          std::lower_bound(new_support.begin(), new_support.end(), support_[j]) -
          new_support.begin());
    std::vector<std::vector<Integer>> gens;
    for (std::size_t i = 0; i < canonical_.rows(); ++i) {
      std::vector<Integer> v(new_support.size());
      for (std::size_t j = 0; j < support_.size(); ++j) v[where[j]] = canonical_(i, j);
      gens.push_back(std::move(v));
    }
    if (full_new)
      for (std::size_t j = 0; j < new_support.size(); ++j)
        if (index_of(new_support[j]) == support_.size()) {
          std::vector<Integer> e(new_support.size());
          e[j] = 1;
          gens.push_back(std::move(e));
        }
    return from_generators(new_support, gens);
  }

  friend bool operator==(const Lattice& a, const Lattice& b) {
    a.require_same_support(b);
    return a.canonical_ == b.canonical_;
  }

 private:
  static void check_support(const std::vector<Prime>& support) {
    for (std::size_t i = 0; i < support.size(); ++i) {
      if (support[i].is_generic())
        throw std::invalid_argument("lattice support must consist of nonzero primes");
      if (i && !(support[i - 1] < support[i]))
        throw std::invalid_argument("lattice support must be strictly ascending");
    }
  }
  void require_same_support(const Lattice& other) const {
    if (support_ != other.support_)
      throw std::invalid_argument("lattices over different supports");
  }

  std::vector<Prime> support_;
  IntMatrix basis_;
  IntMatrix canonical_;
};

inline bool lattice_contains(const Lattice& h, const std::vector<Integer>& v) {
  return h.contains(v);
}
inline bool lattice_equal(const Lattice& a, const Lattice& b) { return a == b; }

}  // namespace twothree
