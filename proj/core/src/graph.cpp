#include "gwf/graph.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>
#include <sstream>

#include "gwf/errors.hpp"

namespace gwf {

namespace {

constexpr std::size_t kWordBits = 64;

std::size_t words_for(int n) { return (static_cast<std::size_t>(n) + kWordBits - 1) / kWordBits; }

std::uint64_t bit_of(int v) { return std::uint64_t{1} << ((v - 1) % kWordBits); }
std::size_t word_of(int v) { return static_cast<std::size_t>(v - 1) / kWordBits; }

}  // namespace

LabeledGraph::LabeledGraph(int n) : n_(n), words_(0) {
  if (n < 1) throw PreconditionError("LabeledGraph: n must be >= 1");
  words_ = words_for(n);
  bits_.assign(words_ * static_cast<std::size_t>(n), 0);
}

LabeledGraph LabeledGraph::complete(int n) {
  LabeledGraph g(n);
  for (int u = 1; u <= n; ++u) {
    for (int v = u + 1; v <= n; ++v) g.add_edge(u, v);
  }
  return g;
}

LabeledGraph LabeledGraph::from_edges(int n, std::span<const std::pair<int, int>> edges) {
  LabeledGraph g(n);
  for (const auto& [u, v] : edges) {
    if (u == v) throw PreconditionError("LabeledGraph: self-loop on " + std::to_string(u));
    g.add_edge(u, v);
  }
  return g;
}

LabeledGraph LabeledGraph::from_blocks(int n, const std::vector<std::vector<int>>& blocks) {
  LabeledGraph g(n);
  for (const auto& block : blocks) {
    for (std::size_t a = 0; a < block.size(); ++a) {
      for (std::size_t b = a + 1; b < block.size(); ++b) g.add_edge(block[a], block[b]);
    }
  }
  return g;
}

void LabeledGraph::check_label(int v) const {
  if (v < 1 || v > n_) {
    throw PreconditionError("vertex label " + std::to_string(v) + " outside 1.." +
                            std::to_string(n_));
  }
}

bool LabeledGraph::has_edge(int u, int v) const {
  check_label(u);
  check_label(v);
  return (row(u)[word_of(v)] & bit_of(v)) != 0;
}

void LabeledGraph::add_edge(int u, int v) {
  check_label(u);
  check_label(v);
  if (u == v) throw PreconditionError("LabeledGraph: self-loop on " + std::to_string(u));
  row(u)[word_of(v)] |= bit_of(v);
  row(v)[word_of(u)] |= bit_of(u);
}

void LabeledGraph::remove_edge(int u, int v) {
  check_label(u);
  check_label(v);
  row(u)[word_of(v)] &= ~bit_of(v);
  row(v)[word_of(u)] &= ~bit_of(u);
}

void LabeledGraph::isolate(int v) {
  check_label(v);
  std::uint64_t* r = row(v);
  for (std::size_t w = 0; w < words_; ++w) {
    std::uint64_t bits = r[w];
    while (bits != 0) {
      const int b = std::countr_zero(bits);
      bits &= bits - 1;
      const int u = static_cast<int>(w * kWordBits) + b + 1;
      row(u)[word_of(v)] &= ~bit_of(v);
    }
    r[w] = 0;
  }
}

void LabeledGraph::copy_neighborhood_into(int source, int target) {
  // target := N(source) + {source}; caller has isolated target.
  const std::uint64_t* s = row(source);
  for (std::size_t w = 0; w < words_; ++w) {
    std::uint64_t bits = s[w];
    while (bits != 0) {
      const int b = std::countr_zero(bits);
      bits &= bits - 1;
      const int u = static_cast<int>(w * kWordBits) + b + 1;
      if (u != target) add_edge(u, target);
    }
  }
  add_edge(source, target);
}

int LabeledGraph::degree(int v) const {
  check_label(v);
  int d = 0;
  const std::uint64_t* r = row(v);
  for (std::size_t w = 0; w < words_; ++w) d += std::popcount(r[w]);
  return d;
}

std::vector<int> LabeledGraph::neighbors(int v) const {
  check_label(v);
  std::vector<int> out;
  const std::uint64_t* r = row(v);
  for (std::size_t w = 0; w < words_; ++w) {
    std::uint64_t bits = r[w];
    while (bits != 0) {
      out.push_back(static_cast<int>(w * kWordBits) + std::countr_zero(bits) + 1);
      bits &= bits - 1;
    }
  }
  return out;
}

std::size_t LabeledGraph::edge_count() const {
  std::size_t total = 0;
  for (std::uint64_t w : bits_) total += static_cast<std::size_t>(std::popcount(w));
  return total / 2;
}

std::vector<std::pair<int, int>> LabeledGraph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int u = 1; u <= n_; ++u) {
    for (int v : neighbors(u)) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

std::string LabeledGraph::key() const {
  std::string out = "n=" + std::to_string(n_) + ":";
  bool first = true;
  for (const auto& [u, v] : edges()) {
    if (!first) out += ',';
    first = false;
    out += std::to_string(u) + '-' + std::to_string(v);
  }
  return out;
}

AdjacencyMatrix::AdjacencyMatrix(std::vector<int> index_set) : index_(std::move(index_set)) {
  if (index_.empty()) throw PreconditionError("AdjacencyMatrix: empty index set");
  std::sort(index_.begin(), index_.end());
  if (std::adjacent_find(index_.begin(), index_.end()) != index_.end()) {
    throw PreconditionError("AdjacencyMatrix: index set has repeated entries");
  }
  if (index_.front() < 1) throw PreconditionError("AdjacencyMatrix: indices must be positive");
  entries_.assign(index_.size() * index_.size(), 0);
}

AdjacencyMatrix AdjacencyMatrix::zero(std::vector<int> index_set) {
  return AdjacencyMatrix(std::move(index_set));
}

AdjacencyMatrix AdjacencyMatrix::complete(std::vector<int> index_set) {
  AdjacencyMatrix a(std::move(index_set));
  for (std::size_t p = 0; p < a.size(); ++p) {
    for (std::size_t q = p + 1; q < a.size(); ++q) a.set_pos(p, q, 1);
  }
  return a;
}

AdjacencyMatrix AdjacencyMatrix::on_range(int k) {
  if (k < 1) throw PreconditionError("AdjacencyMatrix: k must be >= 1");
  std::vector<int> xi(static_cast<std::size_t>(k));
  std::iota(xi.begin(), xi.end(), 1);
  return AdjacencyMatrix(std::move(xi));
}

AdjacencyMatrix AdjacencyMatrix::from_code(std::vector<int> index_set, std::uint64_t code) {
  AdjacencyMatrix a(std::move(index_set));
  const std::size_t k = a.size();
  if (k * (k - 1) / 2 > 64) throw UnsupportedSizeError("AdjacencyMatrix::from_code: k > 11");
  std::size_t bit = 0;
  for (std::size_t p = 0; p < k; ++p) {
    for (std::size_t q = p + 1; q < k; ++q, ++bit) {
      if ((code >> bit) & 1U) a.set_pos(p, q, 1);
    }
  }
  if (bit < 64 && (code >> bit) != 0) {
    throw PreconditionError("AdjacencyMatrix::from_code: code has bits beyond the upper triangle");
  }
  return a;
}

AdjacencyMatrix AdjacencyMatrix::from_rows(std::vector<int> index_set,
                                           const std::vector<std::vector<int>>& rows) {
  AdjacencyMatrix a(std::move(index_set));
  const std::size_t k = a.size();
  if (rows.size() != k) throw PreconditionError("AdjacencyMatrix: row count mismatch");
  for (std::size_t p = 0; p < k; ++p) {
    if (rows[p].size() != k) throw PreconditionError("AdjacencyMatrix: row length mismatch");
    for (std::size_t q = 0; q < k; ++q) {
      const int v = rows[p][q];
      if (v != 0 && v != 1) throw PreconditionError("AdjacencyMatrix: entries must be 0/1");
      if (v != rows[q][p]) throw PreconditionError("AdjacencyMatrix: matrix not symmetric");
      if (p == q && v != 0) throw PreconditionError("AdjacencyMatrix: nonzero diagonal");
    }
  }
  for (std::size_t p = 0; p < k; ++p) {
    for (std::size_t q = p + 1; q < k; ++q) a.set_pos(p, q, rows[p][q]);
  }
  return a;
}

bool AdjacencyMatrix::contains(int label) const {
  return std::binary_search(index_.begin(), index_.end(), label);
}

std::size_t AdjacencyMatrix::position(int label) const {
  const auto it = std::lower_bound(index_.begin(), index_.end(), label);
  if (it == index_.end() || *it != label) {
    throw PreconditionError("index " + std::to_string(label) + " not in the index set");
  }
  return static_cast<std::size_t>(it - index_.begin());
}

void AdjacencyMatrix::set_pos(std::size_t p, std::size_t q, int value) {
  if (p == q) {
    if (value != 0) throw PreconditionError("AdjacencyMatrix: diagonal must stay zero");
    return;
  }
  const auto v = static_cast<std::uint8_t>(value != 0);
  entries_[p * size() + q] = v;
  entries_[q * size() + p] = v;
}

std::size_t AdjacencyMatrix::edge_count() const {
  return static_cast<std::size_t>(std::count(entries_.begin(), entries_.end(), 1)) / 2;
}

bool AdjacencyMatrix::column_is_zero_pos(std::size_t p) const {
  for (std::size_t q = 0; q < size(); ++q) {
    if (at_pos(q, p) != 0) return false;
  }
  return true;
}

std::uint64_t AdjacencyMatrix::code() const {
  const std::size_t k = size();
  if (k * (k - 1) / 2 > 64) throw UnsupportedSizeError("AdjacencyMatrix::code: k > 11");
  std::uint64_t code = 0;
  std::size_t bit = 0;
  for (std::size_t p = 0; p < k; ++p) {
    for (std::size_t q = p + 1; q < k; ++q, ++bit) {
      if (at_pos(p, q) != 0) code |= std::uint64_t{1} << bit;
    }
  }
  return code;
}

std::string AdjacencyMatrix::key() const {
  std::string out = "[";
  for (std::size_t p = 0; p < size(); ++p) {
    if (p > 0) out += ',';
    out += std::to_string(index_[p]);
  }
  out += "]:";
  for (std::size_t p = 0; p < size(); ++p) {
    for (std::size_t q = p + 1; q < size(); ++q) out += at_pos(p, q) != 0 ? '1' : '0';
  }
  return out;
}

std::vector<std::vector<int>> AdjacencyMatrix::rows() const {
  std::vector<std::vector<int>> out(size(), std::vector<int>(size(), 0));
  for (std::size_t p = 0; p < size(); ++p) {
    for (std::size_t q = 0; q < size(); ++q) out[p][q] = at_pos(p, q);
  }
  return out;
}

FrequencySpectrum::FrequencySpectrum(std::map<int, int> counts) {
  for (const auto& [k, m] : counts) {
    if (k < 1) throw PreconditionError("FrequencySpectrum: sizes must be positive");
    if (m < 0) throw PreconditionError("FrequencySpectrum: multiplicities must be non-negative");
    if (m > 0) {
      counts_.emplace(k, m);
      total_ += k * m;
    }
  }
}

FrequencySpectrum FrequencySpectrum::from_sizes(std::span<const int> sizes) {
  std::map<int, int> counts;
  for (int s : sizes) ++counts[s];
  return FrequencySpectrum(std::move(counts));
}

FrequencySpectrum FrequencySpectrum::parse(const std::string& key) {
  std::map<int, int> counts;
  std::stringstream in(key);
  std::string part;
  while (std::getline(in, part, ';')) {
    const auto caret = part.find('^');
    if (caret == std::string::npos) throw PreconditionError("bad spectrum key '" + key + "'");
    try {
      counts[std::stoi(part.substr(0, caret))] += std::stoi(part.substr(caret + 1));
    } catch (const std::exception&) {
      throw PreconditionError("bad spectrum key '" + key + "'");
    }
  }
  return FrequencySpectrum(std::move(counts));
}

int FrequencySpectrum::count(int k) const {
  const auto it = counts_.find(k);
  return it == counts_.end() ? 0 : it->second;
}

int FrequencySpectrum::parts() const noexcept {
  int total = 0;
  for (const auto& [k, m] : counts_) total += m;
  return total;
}

std::vector<int> FrequencySpectrum::sizes() const {
  std::vector<int> out;
  for (auto it = counts_.rbegin(); it != counts_.rend(); ++it) {
    out.insert(out.end(), static_cast<std::size_t>(it->second), it->first);
  }
  return out;
}

std::string FrequencySpectrum::key() const {
  std::string out;
  for (const auto& [k, m] : counts_) {
    if (!out.empty()) out += ';';
    out += std::to_string(k) + '^' + std::to_string(m);
  }
  return out;
}

FrequencySpectrum FrequencySpectrum::moved(int from, int to) const {
  std::map<int, int> counts = counts_;
  auto it = counts.find(from);
  if (it == counts.end() || it->second == 0) {
    throw PreconditionError("FrequencySpectrum::moved: no block of size " + std::to_string(from));
  }
  if (--it->second == 0) counts.erase(it);
  if (to > 0) ++counts[to];
  return FrequencySpectrum(std::move(counts));
}

void ModelParams::validate() const {
  if (!(mu >= 0.0)) throw PreconditionError("mu must be >= 0");
  if (n < 1) throw PreconditionError("n must be >= 1");
}

void validate_types(const TypeVector& x) {
  if (x.empty()) throw PreconditionError("type vector must be non-empty");
  for (double v : x) {
    if (!(v >= 0.0 && v <= 1.0)) throw PreconditionError("types must lie in [0,1]");
  }
}

std::vector<std::vector<int>> components(const LabeledGraph& g) {
  const int n = g.n();
  std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
  std::vector<std::vector<int>> out;
  std::vector<int> queue;
  for (int s = 1; s <= n; ++s) {
    if (seen[s]) continue;
    std::vector<int> comp;
    queue.assign(1, s);
    seen[s] = 1;
    while (!queue.empty()) {
      const int v = queue.back();
      queue.pop_back();
      comp.push_back(v);
      for (int u : g.neighbors(v)) {
        if (!seen[u]) {
          seen[u] = 1;
          queue.push_back(u);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

FrequencySpectrum spectrum_of_graph(const LabeledGraph& g) {
  std::map<int, int> counts;
  for (const auto& c : components(g)) ++counts[static_cast<int>(c.size())];
  return FrequencySpectrum(std::move(counts));
}

FrequencySpectrum spectrum_of_types(const TypeVector& x) {
  validate_types(x);
  std::map<double, int> multiplicity;
  for (double v : x) ++multiplicity[v];
  std::map<int, int> counts;
  for (const auto& [value, m] : multiplicity) ++counts[m];
  return FrequencySpectrum(std::move(counts));
}

bool is_complete_components(const LabeledGraph& g) {
  // Adjacency plus equality is an equivalence relation iff every component
  // is a clique.
  for (const auto& comp : components(g)) {
    const auto size = static_cast<int>(comp.size());
    for (int v : comp) {
      if (g.degree(v) != size - 1) return false;
    }
  }
  return true;
}

AdjacencyMatrix adj_of_tuple(const LabeledGraph& g, std::span<const int> xs,
                             std::vector<int> index_set) {
  if (xs.size() != index_set.size()) {
    throw PreconditionError("adj_of_tuple: tuple and index set differ in length");
  }
  std::set<int> distinct(xs.begin(), xs.end());
  if (distinct.size() != xs.size()) throw PreconditionError("adj_of_tuple: repeated labels");
  // Pair tuple entries with the index set in its given order, then sort.
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t p = 0; p < xs.size(); ++p) pairs.emplace_back(index_set[p], xs[p]);
  std::sort(pairs.begin(), pairs.end());
  AdjacencyMatrix a(std::move(index_set));
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    for (std::size_t q = p + 1; q < pairs.size(); ++q) {
      if (g.has_edge(pairs[p].second, pairs[q].second)) a.set_pos(p, q, 1);
    }
  }
  return a;
}

AdjacencyMatrix duplicate(const AdjacencyMatrix& a, int i, int j) {
  if (i == j) throw PreconditionError("duplicate: i and j must differ");
  const std::size_t pi = a.position(i);
  const std::size_t pj = a.position(j);
  AdjacencyMatrix out = a;
  for (std::size_t l = 0; l < a.size(); ++l) {
    if (l == pj) continue;
    out.set_pos(l, pj, l == pi ? 1 : a.at_pos(l, pi));
  }
  return out;
}

AdjacencyMatrix ground(const AdjacencyMatrix& a, int i) {
  const std::size_t pi = a.position(i);
  AdjacencyMatrix out = a;
  for (std::size_t l = 0; l < a.size(); ++l) {
    if (l != pi) out.set_pos(l, pi, 0);
  }
  return out;
}

AdjacencyMatrix delete_index(const AdjacencyMatrix& a, int j) {
  const std::size_t pj = a.position(j);
  if (a.size() < 2) throw PreconditionError("delete_index: index set would become empty");
  std::vector<int> xi;
  for (int label : a.index_set()) {
    if (label != j) xi.push_back(label);
  }
  AdjacencyMatrix out(std::move(xi));
  for (std::size_t p = 0, op = 0; p < a.size(); ++p) {
    if (p == pj) continue;
    for (std::size_t q = p + 1, oq = op + 1; q < a.size(); ++q) {
      if (q == pj) continue;
      out.set_pos(op, oq, a.at_pos(p, q));
      ++oq;
    }
    ++op;
  }
  return out;
}

bool is_duplication_fixed_point(const AdjacencyMatrix& a, int i, int j) {
  if (i == j) throw PreconditionError("is_duplication_fixed_point: i and j must differ");
  const std::size_t pi = a.position(i);
  const std::size_t pj = a.position(j);
  for (std::size_t l = 0; l < a.size(); ++l) {
    if (l == pj) continue;
    const int expected = l == pi ? 1 : a.at_pos(l, pi);
    if (a.at_pos(l, pj) != expected) return false;
  }
  return true;
}

std::string isomorphism_key(const LabeledGraph& g) {
  const int n = g.n();
  if (is_complete_components(g)) return "C" + std::to_string(n) + ":" + spectrum_of_graph(g).key();
  if (n > kMaxCanonicalFormVertices) {
    throw UnsupportedSizeError("isomorphism_key: canonical form limited to n <= 9 for graphs "
                               "with non-complete components (n=" + std::to_string(n) + ")");
  }
  // Restrict to permutations that list vertices by non-increasing degree;
  // any such ordering of an isomorphic graph reaches the same minimum.
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 1);
  std::vector<int> deg(static_cast<std::size_t>(n) + 1);
  for (int v = 1; v <= n; ++v) deg[v] = g.degree(v);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return deg[a] != deg[b] ? deg[a] > deg[b] : a < b; });
  // Degree-class boundaries; permute only within classes.
  std::vector<std::pair<std::size_t, std::size_t>> classes;
  for (std::size_t s = 0; s < order.size();) {
    std::size_t e = s;
    while (e < order.size() && deg[order[e]] == deg[order[s]]) ++e;
    classes.emplace_back(s, e);
    s = e;
  }
  auto encode = [&](const std::vector<int>& perm) {
    std::uint64_t code = 0;
    int bit = 0;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q, ++bit) {
        if (g.has_edge(perm[p], perm[q])) code |= std::uint64_t{1} << bit;
      }
    }
    return code;
  };
  std::uint64_t best = ~std::uint64_t{0};
  // Odometer over the per-class permutations.
  for (auto& [s, e] : classes) std::sort(order.begin() + s, order.begin() + e);
  while (true) {
    best = std::min(best, encode(order));
    std::size_t c = classes.size();
    bool advanced = false;
    while (c > 0) {
      --c;
      auto [s, e] = classes[c];
      if (std::next_permutation(order.begin() + s, order.begin() + e)) {
        advanced = true;
        break;
      }
    }
    if (!advanced) break;
  }
  std::ostringstream out;
  out << "G" << n << ":" << std::hex << best;
  return out.str();
}

void poach_inplace(LabeledGraph& g, int v1, int v2) {
  if (v1 == v2) throw PreconditionError("poach: v1 and v2 must differ");
  g.isolate(v2);
  g.copy_neighborhood_into(v1, v2);
}

LabeledGraph poach(const LabeledGraph& g, int v1, int v2) {
  LabeledGraph out = g;
  poach_inplace(out, v1, v2);
  return out;
}

LabeledGraph self_employ(const LabeledGraph& g, int v) {
  LabeledGraph out = g;
  out.isolate(v);
  return out;
}

LabeledGraph graph_of_spectrum(const FrequencySpectrum& nu) {
  if (nu.total() < 1) throw PreconditionError("graph_of_spectrum: empty spectrum");
  std::vector<std::vector<int>> blocks;
  int next = 1;
  for (int s : nu.sizes()) {
    std::vector<int> block(static_cast<std::size_t>(s));
    std::iota(block.begin(), block.end(), next);
    next += s;
    blocks.push_back(std::move(block));
  }
  return LabeledGraph::from_blocks(nu.total(), blocks);
}

LabeledGraph graph_of_adjacency(const AdjacencyMatrix& a) {
  LabeledGraph g(static_cast<int>(a.size()));
  for (std::size_t p = 0; p < a.size(); ++p) {
    for (std::size_t q = p + 1; q < a.size(); ++q) {
      if (a.at_pos(p, q) != 0) g.add_edge(static_cast<int>(p) + 1, static_cast<int>(q) + 1);
    }
  }
  return g;
}

AdjacencyMatrix adjacency_of_graph(const LabeledGraph& g) {
  AdjacencyMatrix a = AdjacencyMatrix::on_range(g.n());
  for (const auto& [u, v] : g.edges()) a.set(u, v, 1);
  return a;
}

}  // namespace gwf
