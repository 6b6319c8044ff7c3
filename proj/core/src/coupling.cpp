#include "gwf/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "gwf/errors.hpp"

namespace gwf {

namespace {

constexpr std::uint64_t kTypeStreamBase = std::uint64_t{1} << 48;

}  // namespace

double DrivingNoise::k_type(int i, std::uint64_t m) const {
  if (i < 1 || i > n || m < 1) throw PreconditionError("k_type: bad individual or index");
  return Rng(seed, kTypeStreamBase + static_cast<std::uint64_t>(i)).uniform_at(m - 1);
}

DrivingNoise generate_noise(int n, double mu, double t_end, std::uint64_t seed) {
  if (n < 1) throw PreconditionError("generate_noise: n must be >= 1");
  if (!(mu >= 0.0)) throw PreconditionError("generate_noise: mu must be >= 0");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
    throw PreconditionError("generate_noise: t_end must be finite and >= 0");
  }
  DrivingNoise noise;
  noise.n = n;
  noise.mu = mu;
  noise.t_end = t_end;
  noise.seed = seed;
  noise.pi1.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      if (i == j) continue;
      const auto idx = static_cast<std::size_t>((i - 1) * n + (j - 1));
      Rng rng(seed, idx);
      for (double t = rng.exponential(1.0); t <= t_end; t += rng.exponential(1.0)) {
        noise.pi1[idx].push_back(t);
      }
    }
  }
  if (mu > 0.0) {
    for (int i = 1; i <= n; ++i) {
      Rng rng(seed, static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n) +
                        static_cast<std::uint64_t>(i));
      for (double t = rng.exponential(mu); t <= t_end; t += rng.exponential(mu)) {
        noise.pi2.emplace_back(i, t);
      }
    }
    std::sort(noise.pi2.begin(), noise.pi2.end(), [](const auto& a, const auto& b) {
      return std::tie(a.second, a.first) < std::tie(b.second, b.first);
    });
  }
  return noise;
}

std::vector<NoiseMark> ordered_marks(const DrivingNoise& noise) {
  std::vector<NoiseMark> marks;
  for (int i = 1; i <= noise.n; ++i) {
    for (int j = 1; j <= noise.n; ++j) {
      if (i == j) continue;
      for (double t : noise.pair_times(i, j)) marks.push_back({t, NoiseSource::kPairs, i, j});
    }
  }
  for (const auto& [i, t] : noise.pi2) marks.push_back({t, NoiseSource::kMutations, i, 0});
  std::sort(marks.begin(), marks.end(), [](const NoiseMark& a, const NoiseMark& b) {
    return std::make_tuple(a.time, static_cast<int>(a.source), a.i, a.j) <
           std::make_tuple(b.time, static_cast<int>(b.source), b.i, b.j);
  });
  return marks;
}

std::vector<int> coupling_bijection(const LabeledGraph& g0, const TypeVector& y0) {
  const int n = g0.n();
  if (static_cast<int>(y0.size()) != n) {
    throw PreconditionError("coupling: graph and type vector sizes differ");
  }
  if (!is_complete_components(g0)) {
    throw PreconditionError("coupling: initial graph must have complete components");
  }
  if (spectrum_of_graph(g0) != spectrum_of_types(y0)) {
    throw PreconditionError("coupling: initial graph and type spectra differ");
  }
  auto comps = components(g0);
  std::stable_sort(comps.begin(), comps.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  std::map<double, std::vector<int>> by_value;
  for (int i = 1; i <= n; ++i) by_value[y0[static_cast<std::size_t>(i - 1)]].push_back(i);
  std::vector<std::vector<int>> classes;
  for (auto& [value, members] : by_value) classes.push_back(std::move(members));
  std::stable_sort(classes.begin(), classes.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  std::vector<int> gamma(static_cast<std::size_t>(n), 0);
  for (std::size_t c = 0; c < comps.size(); ++c) {
    for (std::size_t r = 0; r < comps[c].size(); ++r) {
      gamma[static_cast<std::size_t>(comps[c][r] - 1)] = classes[c][r];
    }
  }
  return gamma;
}

CoupledPaths coupled_paths(const LabeledGraph& g0, const TypeVector& y0,
                           const DrivingNoise& noise) {
  validate_types(y0);
  if (noise.n != g0.n()) throw PreconditionError("coupled_paths: noise size differs from graph");
  CoupledPaths out;
  out.gamma = coupling_bijection(g0, y0);
  out.gamma_inv.assign(out.gamma.size(), 0);
  for (std::size_t v = 0; v < out.gamma.size(); ++v) {
    out.gamma_inv[static_cast<std::size_t>(out.gamma[v] - 1)] = static_cast<int>(v) + 1;
  }
  out.graph.seed = out.types.seed = noise.seed;
  out.graph.t_end = out.types.t_end = noise.t_end;
  out.graph.states.push_back(g0);
  out.types.states.push_back(y0);
  LabeledGraph g = g0;
  TypeVector y = y0;
  std::vector<std::uint64_t> mutations(static_cast<std::size_t>(noise.n), 0);
  for (const NoiseMark& mark : ordered_marks(noise)) {
    CoupledStep step;
    step.time = mark.time;
    step.i = mark.i;
    step.j = mark.j;
    const int vi = out.gamma_inv[static_cast<std::size_t>(mark.i - 1)];
    if (mark.source == NoiseSource::kPairs) {
      step.kind = MoveKind::kResample;
      y = apply_event(y, {1.0, MoveKind::kResample, mark.i, mark.j}, 0.0);
      poach_inplace(g, vi, out.gamma_inv[static_cast<std::size_t>(mark.j - 1)]);
    } else {
      step.kind = MoveKind::kMutate;
      const std::uint64_t m = ++mutations[static_cast<std::size_t>(mark.i - 1)];
      y = apply_event(y, {noise.mu, MoveKind::kMutate, mark.i, 0}, noise.k_type(mark.i, m));
      g.isolate(vi);
    }
    step.graph_spectrum_key = spectrum_of_graph(g).key();
    step.type_spectrum_key = spectrum_of_types(y).key();
    step.invariant_ok = step.graph_spectrum_key == step.type_spectrum_key;
    out.trace.push_back(std::move(step));
    out.graph.jump_times.push_back(mark.time);
    out.types.jump_times.push_back(mark.time);
    out.graph.states.push_back(g);
    out.types.states.push_back(y);
  }
  return out;
}

InvariantCheck verify_coupling_invariant(const CoupledPaths& paths) {
  InvariantCheck check;
  const auto& gs = paths.graph.states;
  const auto& ys = paths.types.states;
  if (gs.size() != ys.size() || gs.empty()) {
    check.ok = false;
    return check;
  }
  for (std::size_t idx = 0; idx < gs.size(); ++idx) {
    ++check.checked;
    if (spectrum_of_graph(gs[idx]) != spectrum_of_types(ys[idx])) {
      check.ok = false;
      check.first_violation_time = idx == 0 ? 0.0 : paths.graph.jump_times[idx - 1];
      return check;
    }
  }
  return check;
}

TypeVector ancestor_trace_types(const TypeVector& y0, const DrivingNoise& noise, double t) {
  if (noise.n > 10) throw UnsupportedSizeError("ancestor_trace_types: n must be <= 10");
  if (static_cast<int>(y0.size()) != noise.n) {
    throw PreconditionError("ancestor_trace_types: size mismatch");
  }
  std::vector<NoiseMark> marks;
  for (const NoiseMark& m : ordered_marks(noise)) {
    if (m.time <= t) marks.push_back(m);
  }
  TypeVector out(y0.size());
  for (int j = 1; j <= noise.n; ++j) {
    int current = j;
    bool resolved = false;
    for (std::size_t idx = marks.size(); idx-- > 0;) {
      const NoiseMark& m = marks[idx];
      if (m.source == NoiseSource::kMutations && m.i == current) {
        // Mutation count of the ancestor on [0, m.time], inclusive.
        std::uint64_t count = 0;
        for (std::size_t b = 0; b <= idx; ++b) {
          if (marks[b].source == NoiseSource::kMutations && marks[b].i == current) ++count;
        }
        out[static_cast<std::size_t>(j - 1)] = noise.k_type(current, count);
        resolved = true;
        break;
      }
      if (m.source == NoiseSource::kPairs && m.j == current) current = m.i;
    }
    if (!resolved) out[static_cast<std::size_t>(j - 1)] = y0[static_cast<std::size_t>(current - 1)];
  }
  return out;
}

}  // namespace gwf
