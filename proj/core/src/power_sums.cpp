#include "gwf/power_sums.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>

#include "gwf/errors.hpp"

namespace gwf {

PowerSumPolynomial PowerSumPolynomial::constant(double c) {
  PowerSumPolynomial p;
  p.add_term({}, c);
  return p;
}

PowerSumPolynomial PowerSumPolynomial::power_sum(int m) {
  if (m < 1) throw PreconditionError("power_sum index must be >= 1");
  PowerSumPolynomial p;
  p.add_term({m}, 1.0);
  return p;
}

void PowerSumPolynomial::add_term(Monomial monomial, double coefficient) {
  std::sort(monomial.begin(), monomial.end());
  auto& c = terms_[monomial];
  c += coefficient;
  if (c == 0.0) terms_.erase(monomial);
}

PowerSumPolynomial& PowerSumPolynomial::operator+=(const PowerSumPolynomial& other) {
  for (const auto& [mono, c] : other.terms_) add_term(mono, c);
  return *this;
}

PowerSumPolynomial PowerSumPolynomial::operator*(const PowerSumPolynomial& other) const {
  PowerSumPolynomial out;
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : other.terms_) {
      Monomial m = ma;
      m.insert(m.end(), mb.begin(), mb.end());
      out.add_term(std::move(m), ca * cb);
    }
  }
  return out;
}

PowerSumPolynomial PowerSumPolynomial::scaled(double factor) const {
  PowerSumPolynomial out;
  for (const auto& [mono, c] : terms_) out.add_term(mono, c * factor);
  return out;
}

long double PowerSumPolynomial::evaluate(std::span<const long double> sums) const {
  long double total = 0.0L;
  for (const auto& [mono, c] : terms_) {
    long double term = c;
    for (int m : mono) {
      if (m >= static_cast<int>(sums.size())) {
        throw PreconditionError("PowerSumPolynomial::evaluate: missing power sum");
      }
      term *= sums[static_cast<std::size_t>(m)];
    }
    total += term;
  }
  return total;
}

int PowerSumPolynomial::max_index() const {
  int best = 0;
  for (const auto& [mono, c] : terms_) {
    if (!mono.empty()) best = std::max(best, mono.back());
  }
  return best;
}

std::vector<std::vector<std::vector<int>>> set_partitions(int r) {
  std::vector<std::vector<std::vector<int>>> out;
  if (r == 0) {
    out.emplace_back();
    return out;
  }
  std::vector<int> label(static_cast<std::size_t>(r), 0);
  std::function<void(int, int)> recurse = [&](int pos, int used) {
    if (pos == r) {
      std::vector<std::vector<int>> blocks(static_cast<std::size_t>(used));
      for (int i = 0; i < r; ++i) blocks[static_cast<std::size_t>(label[i])].push_back(i);
      out.push_back(std::move(blocks));
      return;
    }
    for (int b = 0; b <= used; ++b) {
      label[static_cast<std::size_t>(pos)] = b;
      recurse(pos + 1, std::max(used, b + 1));
    }
  };
  recurse(0, 0);
  return out;
}

namespace {

double mobius_weight(const std::vector<std::vector<int>>& partition) {
  double w = 1.0;
  for (const auto& block : partition) {
    const auto size = static_cast<int>(block.size());
    double f = 1.0;
    for (int i = 2; i < size; ++i) f *= i;
    w *= (size % 2 == 1 ? 1.0 : -1.0) * f;
  }
  return w;
}

// Sum over injective maps of components into blocks of prod_j p_{c_j}.
PowerSumPolynomial injective_iid_sum(const std::vector<int>& sizes) {
  PowerSumPolynomial total;
  for (const auto& partition : set_partitions(static_cast<int>(sizes.size()))) {
    PowerSumPolynomial term = PowerSumPolynomial::constant(mobius_weight(partition));
    for (const auto& block : partition) {
      int m = 0;
      for (int j : block) m += sizes[static_cast<std::size_t>(j)];
      term = term * PowerSumPolynomial::power_sum(m);
    }
    total += term;
  }
  return total;
}

double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

// Coefficients of the falling factorial (s)_c as a polynomial in s.
std::vector<double> falling_factorial_coefficients(int c) {
  std::vector<double> poly{1.0};
  for (int r = 0; r < c; ++r) {
    std::vector<double> next(poly.size() + 1, 0.0);
    for (std::size_t d = 0; d < poly.size(); ++d) {
      next[d + 1] += poly[d];
      next[d] -= r * poly[d];
    }
    poly = std::move(next);
  }
  return poly;
}

PowerSumPolynomial build_iid(const std::vector<int>& sizes) {
  std::vector<int> big;
  int singletons = 0;
  for (int c : sizes) {
    if (c == 1) {
      ++singletons;
    } else {
      big.push_back(c);
    }
  }
  // Each singleton sits either alone in a block or in the dust.
  PowerSumPolynomial total;
  for (int t = 0; t <= singletons; ++t) {
    std::vector<int> placed = big;
    placed.insert(placed.end(), static_cast<std::size_t>(singletons - t), 1);
    PowerSumPolynomial dust_power = PowerSumPolynomial::constant(1.0);
    PowerSumPolynomial dust = PowerSumPolynomial::constant(1.0);
    dust.add_term({1}, -1.0);
    for (int u = 0; u < t; ++u) dust_power = dust_power * dust;
    total += (dust_power * injective_iid_sum(placed)).scaled(binomial(singletons, t));
  }
  return total;
}

PowerSumPolynomial build_finite(const std::vector<int>& sizes) {
  PowerSumPolynomial total;
  for (const auto& partition : set_partitions(static_cast<int>(sizes.size()))) {
    PowerSumPolynomial term = PowerSumPolynomial::constant(mobius_weight(partition));
    for (const auto& block : partition) {
      std::vector<double> poly{1.0};
      for (int j : block) {
        const auto ff = falling_factorial_coefficients(sizes[static_cast<std::size_t>(j)]);
        std::vector<double> next(poly.size() + ff.size() - 1, 0.0);
        for (std::size_t a = 0; a < poly.size(); ++a) {
          for (std::size_t b = 0; b < ff.size(); ++b) next[a + b] += poly[a] * ff[b];
        }
        poly = std::move(next);
      }
      PowerSumPolynomial block_sum;
      for (std::size_t d = 1; d < poly.size(); ++d) {
        if (poly[d] != 0.0) block_sum.add_term({static_cast<int>(d)}, poly[d]);
      }
      term = term * block_sum;
    }
    total += term;
  }
  return total;
}

template <class Build>
const PowerSumPolynomial& cached(std::map<std::vector<int>, PowerSumPolynomial>& cache,
                                 std::mutex& mutex, std::vector<int> sizes, Build build) {
  std::sort(sizes.begin(), sizes.end(), std::greater<>());
  std::lock_guard lock(mutex);
  auto it = cache.find(sizes);
  if (it == cache.end()) it = cache.emplace(sizes, build(sizes)).first;
  return it->second;
}

}  // namespace

const PowerSumPolynomial& iid_block_density_polynomial(const std::vector<int>& component_sizes) {
  static std::map<std::vector<int>, PowerSumPolynomial> cache;
  static std::mutex mutex;
  return cached(cache, mutex, component_sizes, build_iid);
}

const PowerSumPolynomial& finite_injection_count_polynomial(
    const std::vector<int>& component_sizes) {
  static std::map<std::vector<int>, PowerSumPolynomial> cache;
  static std::mutex mutex;
  return cached(cache, mutex, component_sizes, build_finite);
}

}  // namespace gwf
