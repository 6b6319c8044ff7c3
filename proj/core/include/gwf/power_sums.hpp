#pragma once

#include <map>
#include <span>
#include <vector>

namespace gwf {

// Polynomial in power sums P_m = sum_i x_i^m, m >= 1. A monomial is the
// sorted multiset of its indices, e.g. {1,1,2} is P_1^2 P_2.
class PowerSumPolynomial {
 public:
  using Monomial = std::vector<int>;

  static PowerSumPolynomial constant(double c);
  static PowerSumPolynomial power_sum(int m);

  void add_term(Monomial monomial, double coefficient);
  PowerSumPolynomial& operator+=(const PowerSumPolynomial& other);
  PowerSumPolynomial operator*(const PowerSumPolynomial& other) const;
  PowerSumPolynomial scaled(double factor) const;

  // sums[m] holds P_m; sums[0] is ignored.
  long double evaluate(std::span<const long double> sums) const;
  int max_index() const;
  const std::map<Monomial, double>& terms() const noexcept { return terms_; }

 private:
  std::map<Monomial, double> terms_;
};

// Restricted-growth enumeration of the set partitions of {0..r-1}; each
// partition is a list of blocks.
std::vector<std::vector<std::vector<int>>> set_partitions(int r);

// Density of the clique pattern with the given component sizes under i.i.d.
// sampling from a block graphon with block masses a_i and dust 1 - sum a_i,
// as a polynomial in p_m = sum_i a_i^m.
const PowerSumPolynomial& iid_block_density_polynomial(const std::vector<int>& component_sizes);

// Number of injections of the clique pattern into a union of cliques with
// sizes s_i, as a polynomial in S_m = sum_i s_i^m.
const PowerSumPolynomial& finite_injection_count_polynomial(
    const std::vector<int>& component_sizes);

}  // namespace gwf
