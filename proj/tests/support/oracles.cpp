#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace gwf::oracle {

std::vector<std::map<int, int>> integer_partitions(int n) {
  std::vector<std::map<int, int>> out;
  std::map<int, int> current;
  std::function<void(int, int)> rec = [&](int rest, int max_part) {
    if (rest == 0) {
      out.push_back(current);
      return;
    }
    for (int part = std::min(rest, max_part); part >= 1; --part) {
      ++current[part];
      rec(rest - part, part);
      if (--current[part] == 0) current.erase(part);
    }
  };
  rec(n, n);
  return out;
}

long double ewens_pmf(const std::map<int, int>& nu, double mu) {
  int n = 0;
  for (const auto& [j, c] : nu) n += j * c;
  if (mu == 0.0) return nu.size() == 1 && nu.begin()->second == 1 ? 1.0L : 0.0L;
  long double value = 1.0L;
  for (int i = 1; i <= n; ++i) value *= static_cast<long double>(i) / (mu + i - 1);
  for (const auto& [j, c] : nu) {
    for (int r = 1; r <= c; ++r) value *= static_cast<long double>(mu) / (j * r);
  }
  return value;
}

long double count_set_partitions_with_sizes(const std::map<int, int>& nu) {
  int n = 0;
  for (const auto& [j, c] : nu) n += j * c;
  std::vector<int> label(static_cast<std::size_t>(n), 0);
  long double count = 0;
  std::function<void(int, int)> rec = [&](int pos, int blocks) {
    if (pos == n) {
      std::map<int, int> sizes;
      for (int b = 0; b < blocks; ++b) {
        ++sizes[static_cast<int>(std::count(label.begin(), label.end(), b))];
      }
      if (sizes == nu) count += 1;
      return;
    }
    for (int b = 0; b <= blocks; ++b) {
      label[static_cast<std::size_t>(pos)] = b;
      rec(pos + 1, std::max(blocks, b + 1));
    }
  };
  rec(0, 0);
  return count;
}

Rows empty_rows(int n) { return Rows(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0)); }

Rows rows_from_mask(int n, std::uint32_t mask) {
  Rows g = empty_rows(n);
  int bit = 0;
  for (int p = 0; p < n; ++p) {
    for (int q = p + 1; q < n; ++q, ++bit) {
      if ((mask >> bit) & 1U) g[p][q] = g[q][p] = 1;
    }
  }
  return g;
}

std::uint32_t mask_from_rows(const Rows& g) {
  const int n = static_cast<int>(g.size());
  std::uint32_t mask = 0;
  int bit = 0;
  for (int p = 0; p < n; ++p) {
    for (int q = p + 1; q < n; ++q, ++bit) {
      if (g[p][q] != 0) mask |= 1U << bit;
    }
  }
  return mask;
}

Rows isolate_rows(const Rows& g, int v) {
  Rows out = g;
  for (std::size_t u = 0; u < g.size(); ++u) out[v][u] = out[u][v] = 0;
  return out;
}

Rows poach_rows(const Rows& g, int v1, int v2) {
  Rows out = isolate_rows(g, v2);
  const int n = static_cast<int>(g.size());
  for (int u = 0; u < n; ++u) {
    if (u != v2 && (u == v1 || out[v1][u] != 0)) out[v2][u] = out[u][v2] = 1;
  }
  return out;
}

Rows duplicate_rows(const Rows& a, int i, int j) {
  Rows out = a;
  const int n = static_cast<int>(a.size());
  for (int u = 0; u < n; ++u) {
    if (u == j) continue;
    const int value = u == i ? 1 : a[i][u];
    out[j][u] = out[u][j] = value;
  }
  return out;
}

std::map<int, int> component_spectrum(const Rows& g) {
  const int n = static_cast<int>(g.size());
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      if (g[p][q] != 0) parent[find(p)] = find(q);
    }
  }
  std::map<int, int> sizes;
  for (int v = 0; v < n; ++v) ++sizes[find(v)];
  std::map<int, int> nu;
  for (const auto& [root, s] : sizes) ++nu[s];
  return nu;
}

namespace {

std::size_t graph_count(int n) { return std::size_t{1} << (n * (n - 1) / 2); }

void fill_diagonal(Matrix& q) {
  for (std::size_t r = 0; r < q.size(); ++r) {
    long double exit = 0;
    for (std::size_t c = 0; c < q.size(); ++c) {
      if (c != r) exit += q[r][c];
    }
    q[r][r] = -exit;
  }
}

}  // namespace

Matrix poaching_generator(int n, double mu) {
  const std::size_t count = graph_count(n);
  Matrix q(count, std::vector<long double>(count, 0));
  for (std::size_t s = 0; s < count; ++s) {
    const Rows g = rows_from_mask(n, static_cast<std::uint32_t>(s));
    for (int v1 = 0; v1 < n; ++v1) {
      for (int v2 = 0; v2 < n; ++v2) {
        if (v1 != v2) q[s][mask_from_rows(poach_rows(g, v1, v2))] += 1;
      }
      q[s][mask_from_rows(isolate_rows(g, v1))] += mu;
    }
  }
  fill_diagonal(q);
  return q;
}

Matrix duplication_generator(int n, double mu) {
  const std::size_t count = graph_count(n);
  Matrix q(count, std::vector<long double>(count, 0));
  for (std::size_t s = 0; s < count; ++s) {
    const Rows a = rows_from_mask(n, static_cast<std::uint32_t>(s));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i != j) q[s][mask_from_rows(duplicate_rows(a, i, j))] += 1;
      }
      q[s][mask_from_rows(isolate_rows(a, i))] += mu;
    }
  }
  fill_diagonal(q);
  return q;
}

std::vector<long double> stationary_by_iteration(const Matrix& q, std::size_t start) {
  const std::size_t n = q.size();
  long double lambda = 0;
  for (std::size_t r = 0; r < n; ++r) lambda = std::max(lambda, -q[r][r]);
  lambda *= 1.5L;
  std::vector<long double> pi(n, 0);
  pi[start] = 1;
  for (int iter = 0; iter < 200000; ++iter) {
    std::vector<long double> next(n, 0);
    for (std::size_t r = 0; r < n; ++r) {
      if (pi[r] == 0) continue;
      for (std::size_t c = 0; c < n; ++c) {
        next[c] += pi[r] * ((r == c ? 1 : 0) + q[r][c] / lambda);
      }
    }
    long double diff = 0;
    for (std::size_t i = 0; i < n; ++i) diff = std::max(diff, std::fabs(next[i] - pi[i]));
    pi = std::move(next);
    if (diff < 1e-17L) break;
  }
  return pi;
}

namespace {

Matrix matmul(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.size();
  Matrix out(n, std::vector<long double>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t j = 0; j < n; ++j) out[i][j] += a[i][k] * b[k][j];
    }
  }
  return out;
}

}  // namespace

Matrix expm(const Matrix& q, double t) {
  const std::size_t n = q.size();
  long double norm = 0;
  for (const auto& row : q) {
    long double s = 0;
    for (long double x : row) s += std::fabs(x);
    norm = std::max(norm, s);
  }
  int squarings = 0;
  long double scale = t;
  while (norm * std::fabs(scale) > 0.25L) {
    scale /= 2;
    ++squarings;
  }
  Matrix result(n, std::vector<long double>(n, 0));
  Matrix term(n, std::vector<long double>(n, 0));
  for (std::size_t i = 0; i < n; ++i) result[i][i] = term[i][i] = 1;
  for (int k = 1; k <= 30; ++k) {
    term = matmul(term, q);
    for (auto& row : term) {
      for (long double& x : row) x *= scale / k;
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) result[i][j] += term[i][j];
    }
  }
  for (int s = 0; s < squarings; ++s) result = matmul(result, result);
  return result;
}

long double injective_density(const Rows& g, const Rows& pattern) {
  const int n = static_cast<int>(g.size());
  const int k = static_cast<int>(pattern.size());
  if (k > n) return 0;
  std::vector<int> image(static_cast<std::size_t>(k));
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  long double hits = 0;
  long double total = 0;
  std::function<void(int)> rec = [&](int pos) {
    if (pos == k) {
      total += 1;
      for (int p = 0; p < k; ++p) {
        for (int q = p + 1; q < k; ++q) {
          if (g[image[p]][image[q]] != pattern[p][q]) return;
        }
      }
      hits += 1;
      return;
    }
    for (int v = 0; v < n; ++v) {
      if (used[v]) continue;
      used[v] = 1;
      image[pos] = v;
      rec(pos + 1);
      used[v] = 0;
    }
  };
  rec(0);
  return hits / total;
}

long double iid_block_density(const std::vector<double>& blocks, const Rows& pattern) {
  const int k = static_cast<int>(pattern.size());
  long double dust = 1;
  for (double a : blocks) dust -= a;
  const int choices = static_cast<int>(blocks.size()) + 1;  // last = dust
  std::vector<int> assign(static_cast<std::size_t>(k));
  long double total = 0;
  std::function<void(int, long double)> rec = [&](int pos, long double weight) {
    if (pos == k) {
      for (int p = 0; p < k; ++p) {
        for (int q = p + 1; q < k; ++q) {
          const int dust_id = choices - 1;
          const int linked = assign[p] == assign[q] && assign[p] != dust_id ? 1 : 0;
          if (linked != pattern[p][q]) return;
        }
      }
      total += weight;
      return;
    }
    for (int c = 0; c < choices; ++c) {
      const long double w = c + 1 == choices ? dust : static_cast<long double>(blocks[c]);
      if (w <= 0) continue;
      assign[pos] = c;
      rec(pos + 1, weight * w);
    }
  };
  rec(0, 1);
  return total;
}

}  // namespace gwf::oracle
