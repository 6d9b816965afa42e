#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace mvframe {

using cplx = std::complex<double>;

// One point of a finite abelian group, stored with every coordinate reduced
// into [0, n_j).
struct GroupElement {
  std::vector<int> coords;
  bool operator==(const GroupElement&) const = default;
};

// A finite abelian group Z_{n1} x ... x Z_{nm} carrying counting Haar measure
// (every integral over the group is a plain sum over elements).
//
// Elements are enumerated lexicographically over coordinates, last coordinate
// fastest; `rank` is the mixed-radix position in that order. Every vectorized
// object in the library indexes group points by this rank.
class GroupSpec {
 public:
  explicit GroupSpec(std::vector<int> orders);

  const std::vector<int>& orders() const { return orders_; }
  int size() const { return size_; }

  int rank(const GroupElement& x) const;
  GroupElement element(int index) const;
  std::vector<GroupElement> elements() const;
  GroupElement add(const GroupElement& a, const GroupElement& b) const;

  bool operator==(const GroupSpec&) const = default;

 private:
  std::vector<int> orders_;
  int size_ = 1;
};

// chi_k(x) = exp(2*pi*i * sum_j k_j x_j / n_j); unit modulus, multiplicative
// in x. The dual group is indexed by the same element type.
cplx character(const GroupSpec& spec, const GroupElement& dual_index,
               const GroupElement& x);

// The |G| x |G| matrix with entry (rank(x), k) = chi_k(x)/sqrt(|G|). Columns
// are the scalar orthonormal basis functions e_k; the matrix is unitary.
Eigen::MatrixXcd scalar_onb(const GroupSpec& spec);

}  // namespace mvframe
