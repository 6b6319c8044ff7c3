#include "gwf/exact_ctmc.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "gwf/equilibrium.hpp"

namespace gwf {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMajor> view(const DenseMatrix& m) {
  return {m.data(), static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols())};
}

Eigen::Map<RowMajor> view(DenseMatrix& m) {
  return {m.data(), static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols())};
}

}  // namespace

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  }
  return out;
}

double DenseMatrix::max_abs_diff(const DenseMatrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_) {
    throw PreconditionError("max_abs_diff: shape mismatch");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < data_.size(); ++i) {
    worst = std::max(worst, std::abs(data_[i] - other.data_[i]));
  }
  return worst;
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw PreconditionError("multiply: shape mismatch");
  DenseMatrix out(a.rows(), b.cols());
  view(out).noalias() = view(a) * view(b);
  return out;
}

std::size_t RateMatrix::index_of(const std::string& key) const {
  const auto it = std::find(states.begin(), states.end(), key);
  if (it == states.end()) throw PreconditionError("unknown state key '" + key + "'");
  return static_cast<std::size_t>(it - states.begin());
}

double RateMatrix::max_row_sum() const {
  double worst = 0.0;
  for (std::size_t r = 0; r < size(); ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < size(); ++c) sum += q(r, c);
    worst = std::max(worst, std::abs(sum));
  }
  return worst;
}

double DistributionVector::at(const std::string& key) const {
  const auto it = std::find(states.begin(), states.end(), key);
  if (it == states.end()) throw PreconditionError("unknown state key '" + key + "'");
  return probabilities[static_cast<std::size_t>(it - states.begin())];
}

std::vector<std::vector<std::size_t>> closed_classes(const RateMatrix& q) {
  const std::size_t n = q.size();
  // Iterative Tarjan.
  std::vector<long> index(n, -1);
  std::vector<long> low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<std::size_t> stack;
  std::vector<long> component(n, -1);
  long next_index = 0;
  long next_component = 0;
  struct Frame {
    std::size_t v;
    std::size_t child;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!frames.empty()) {
      Frame& fr = frames.back();
      const std::size_t v = fr.v;
      bool descended = false;
      while (fr.child < n) {
        const std::size_t w = fr.child++;
        if (w == v || !(q.q(v, w) > 0.0)) continue;
        if (index[w] < 0) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.push_back({w, 0});
          descended = true;
          break;
        }
        if (on_stack[w]) low[v] = std::min(low[v], index[w]);
      }
      if (descended) continue;
      if (low[v] == index[v]) {
        while (true) {
          const std::size_t w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          component[w] = next_component;
          if (w == v) break;
        }
        ++next_component;
      }
      frames.pop_back();
      if (!frames.empty()) {
        const std::size_t parent = frames.back().v;
        low[parent] = std::min(low[parent], low[v]);
      }
    }
  }
  std::vector<char> has_exit(static_cast<std::size_t>(next_component), 0);
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t w = 0; w < n; ++w) {
      if (w != v && q.q(v, w) > 0.0 && component[v] != component[w]) {
        has_exit[static_cast<std::size_t>(component[v])] = 1;
      }
    }
  }
  std::map<long, std::vector<std::size_t>> grouped;
  for (std::size_t v = 0; v < n; ++v) {
    if (!has_exit[static_cast<std::size_t>(component[v])]) grouped[component[v]].push_back(v);
  }
  std::vector<std::vector<std::size_t>> out;
  for (auto& [id, members] : grouped) out.push_back(std::move(members));
  std::sort(out.begin(), out.end());
  return out;
}

DistributionVector stationary_distribution(const RateMatrix& q) {
  if (q.size() == 0) throw PreconditionError("stationary_distribution: empty state space");
  const auto classes = closed_classes(q);
  if (classes.size() != 1) {
    std::vector<std::vector<std::string>> named;
    for (const auto& c : classes) {
      std::vector<std::string> keys;
      for (std::size_t v : c) keys.push_back(q.states[v]);
      named.push_back(std::move(keys));
    }
    throw ReducibleChainError(
        "stationary_distribution: " + std::to_string(classes.size()) + " closed classes", named);
  }
  const auto& members = classes.front();
  const auto m = static_cast<Eigen::Index>(members.size());
  // Solve Q_c^T pi = 0 with the last equation replaced by sum(pi) = 1.
  Eigen::MatrixXd system(m, m);
  for (Eigen::Index r = 0; r < m; ++r) {
    for (Eigen::Index c = 0; c < m; ++c) {
      system(r, c) = q.q(members[static_cast<std::size_t>(c)], members[static_cast<std::size_t>(r)]);
    }
  }
  system.row(m - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  rhs(m - 1) = 1.0;
  const Eigen::VectorXd solution = system.partialPivLu().solve(rhs);
  DistributionVector out;
  out.states = q.states;
  out.probabilities.assign(q.size(), 0.0);
  for (Eigen::Index i = 0; i < m; ++i) {
    out.probabilities[members[static_cast<std::size_t>(i)]] = solution(i);
  }
  return out;
}

double stationarity_residual(const DistributionVector& pi, const RateMatrix& q) {
  double worst = 0.0;
  for (std::size_t c = 0; c < q.size(); ++c) {
    double flow = 0.0;
    for (std::size_t r = 0; r < q.size(); ++r) flow += pi.probabilities[r] * q.q(r, c);
    worst = std::max(worst, std::abs(flow));
  }
  return worst;
}

DenseMatrix metzler_exponential(const DenseMatrix& a, double t, double tail_tolerance) {
  if (a.rows() != a.cols()) throw PreconditionError("metzler_exponential: matrix not square");
  if (!(t >= 0.0)) throw PreconditionError("metzler_exponential: t must be >= 0");
  const std::size_t n = a.rows();
  double shift = 0.0;
  double max_exit = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      if (c != r && a(r, c) < 0.0) {
        throw PreconditionError("metzler_exponential: negative off-diagonal entry");
      }
      sum += a(r, c);
    }
    shift = std::max(shift, sum);
  }
  // B = A - shift I has non-positive row sums.
  for (std::size_t r = 0; r < n; ++r) max_exit = std::max(max_exit, shift - a(r, r));
  const double scale = std::exp(shift * t);
  if (t == 0.0 || max_exit == 0.0) {
    DenseMatrix out = DenseMatrix::identity(n);
    for (std::size_t r = 0; r < n; ++r) out(r, r) = scale;
    return out;
  }
  const double lambda = 1.01 * max_exit;
  // Split the horizon so that each piece has a moderate Poisson mean.
  const int pieces = std::max(1, static_cast<int>(std::ceil(lambda * t / 200.0)));
  const double dt = t / pieces;
  DenseMatrix kernel(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      kernel(r, c) = (r == c ? 1.0 : 0.0) + (a(r, c) - (r == c ? shift : 0.0)) / lambda;
    }
  }
  const double mean = lambda * dt;
  DenseMatrix power = DenseMatrix::identity(n);
  DenseMatrix piece(n, n);
  double weight = std::exp(-mean);
  double cumulative = 0.0;
  for (int j = 0;; ++j) {
    view(piece) += weight * view(power);
    cumulative += weight;
    if (j > mean && 1.0 - cumulative < tail_tolerance) break;
    if (j > 10000 + 10 * mean) break;
    power = multiply(power, kernel);
    weight *= mean / (j + 1);
  }
  DenseMatrix out = piece;
  for (int p = 1; p < pieces; ++p) out = multiply(out, piece);
  view(out) *= scale;
  return out;
}

DenseMatrix transition_semigroup(const RateMatrix& q, double t) {
  return metzler_exponential(q.q, t);
}

double verify_med_balance(int n, double mu) {
  if (n < 1 || n > 40) throw PreconditionError("verify_med_balance: n must be in 1..40");
  if (!(mu > 0.0)) throw PreconditionError("verify_med_balance: mu must be > 0");
  const ModelParams params{mu, n};
  const auto spectra = enumerate_spectra(n);
  std::map<FrequencySpectrum, double> inflow;
  std::map<FrequencySpectrum, double> outflow;
  for (const auto& nu : spectra) {
    const double pi = med_pmf(nu, mu);
    for (const auto& ev : frequency_events(nu, params)) {
      const FrequencySpectrum target = apply_event(nu, ev);
      if (target == nu) continue;
      inflow[target] += pi * ev.rate;
      outflow[nu] += pi * ev.rate;
    }
  }
  double worst = 0.0;
  for (const auto& nu : spectra) {
    const double in = inflow[nu];
    const double out = outflow[nu];
    const double denom = std::max(std::abs(out), std::numeric_limits<double>::min());
    if (in == 0.0 && out == 0.0) continue;
    worst = std::max(worst, std::abs(in - out) / denom);
  }
  return worst;
}

double product_formula_pi(const FrequencySpectrum& nu, double mu) {
  double value = std::pow(mu, nu.parts());
  for (int j = 1; j <= nu.total(); ++j) value /= mu + (j - 1);
  return value;
}

double corrected_graph_pi(const FrequencySpectrum& nu, double mu) {
  return med_pmf(nu, mu) / class_count(nu);
}

GraphStationaryReport graph_stationary_check(int n, double mu) {
  if (n < 1 || n > 5) throw UnsupportedSizeError("graph_stationary_check: n must be in 1..5");
  const ModelParams params{mu, n};
  params.validate();
  std::vector<LabeledGraph> seeds;
  const int pairs = n * (n - 1) / 2;
  std::vector<std::pair<int, int>> slots;
  for (int u = 1; u <= n; ++u) {
    for (int v = u + 1; v <= n; ++v) slots.emplace_back(u, v);
  }
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << pairs); ++code) {
    LabeledGraph g(n);
    for (int b = 0; b < pairs; ++b) {
      if ((code >> b) & 1U) g.add_edge(slots[static_cast<std::size_t>(b)].first,
                                       slots[static_cast<std::size_t>(b)].second);
    }
    seeds.push_back(std::move(g));
  }
  std::vector<LabeledGraph> states;
  const RateMatrix q = build_rate_matrix(poaching_spec(params), seeds, &states);
  const DistributionVector pi = stationary_distribution(q);
  const auto recurrent = closed_classes(q).front();
  GraphStationaryReport report;
  report.n = n;
  report.mu = mu;
  report.explored_states = q.size();
  for (std::size_t idx : recurrent) {
    const LabeledGraph& g = states[idx];
    const FrequencySpectrum nu = spectrum_of_graph(g);
    GraphStationaryRow row;
    row.state_key = q.states[idx];
    row.spectrum_key = nu.key();
    row.exact_pi = pi.probabilities[idx];
    row.formula_pi_product = product_formula_pi(nu, mu);
    row.formula_pi_corrected = corrected_graph_pi(nu, mu);
    row.abs_diff_product = std::abs(row.exact_pi - row.formula_pi_product);
    row.abs_diff_corrected = std::abs(row.exact_pi - row.formula_pi_corrected);
    report.max_abs_diff_product = std::max(report.max_abs_diff_product, row.abs_diff_product);
    report.max_abs_diff_corrected =
        std::max(report.max_abs_diff_corrected, row.abs_diff_corrected);
    report.rows.push_back(std::move(row));
  }
  return report;
}

double spectrum_projection_residual(int n, double mu) {
  if (n < 1 || n > 7) throw UnsupportedSizeError("spectrum_projection_residual: n must be in 1..7");
  const ModelParams params{mu, n};
  params.validate();
  std::vector<LabeledGraph> graphs;
  const RateMatrix graph_q =
      build_rate_matrix(poaching_spec(params), {LabeledGraph(n)}, &graphs);
  std::vector<FrequencySpectrum> spectra;
  const RateMatrix freq_q =
      build_rate_matrix(frequency_spec(params), enumerate_spectra(n), &spectra);
  double worst = 0.0;
  for (std::size_t r = 0; r < graphs.size(); ++r) {
    if (!is_complete_components(graphs[r])) return std::numeric_limits<double>::infinity();
    const FrequencySpectrum from = spectrum_of_graph(graphs[r]);
    std::map<std::string, double> lumped;
    for (std::size_t c = 0; c < graphs.size(); ++c) {
      if (c == r) continue;
      const double rate = graph_q.q(r, c);
      if (rate > 0.0) lumped[spectrum_of_graph(graphs[c]).key()] += rate;
    }
    const std::size_t fr = freq_q.index_of(from.key());
    for (std::size_t fc = 0; fc < spectra.size(); ++fc) {
      if (fc == fr) continue;
      const auto it = lumped.find(freq_q.states[fc]);
      const double projected = it == lumped.end() ? 0.0 : it->second;
      worst = std::max(worst, std::abs(projected - freq_q.q(fr, fc)));
    }
  }
  return worst;
}

}  // namespace gwf
