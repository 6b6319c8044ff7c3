#include "gwf/chains.hpp"

#include <algorithm>
#include <numeric>

namespace gwf {

const char* to_string(MoveKind kind) noexcept {
  switch (kind) {
    case MoveKind::kPoach: return "poach";
    case MoveKind::kSelfEmploy: return "self_employ";
    case MoveKind::kDuplicate: return "duplicate";
    case MoveKind::kGround: return "ground";
    case MoveKind::kResample: return "resample";
    case MoveKind::kMutate: return "mutate";
    case MoveKind::kMerge: return "merge";
    case MoveKind::kAbsorbSingleton: return "absorb_singleton";
    case MoveKind::kSplitOff: return "split_off";
  }
  return "unknown";
}

double total_rate(const std::vector<TransitionEvent>& events) noexcept {
  double total = 0.0;
  for (const auto& ev : events) total += ev.rate;
  return total;
}

std::vector<TransitionEvent> poach_events(const LabeledGraph& g, const ModelParams& p) {
  const int n = g.n();
  std::vector<TransitionEvent> events;
  events.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int v1 = 1; v1 <= n; ++v1) {
    for (int v2 = 1; v2 <= n; ++v2) {
      if (v1 != v2) events.push_back({1.0, MoveKind::kPoach, v1, v2});
    }
  }
  if (p.mu > 0.0) {
    for (int v = 1; v <= n; ++v) events.push_back({p.mu, MoveKind::kSelfEmploy, v, 0});
  }
  return events;
}

std::vector<TransitionEvent> adjacency_events(const AdjacencyMatrix& a, const ModelParams& p) {
  std::vector<TransitionEvent> events;
  const auto& xi = a.index_set();
  for (int i : xi) {
    for (int j : xi) {
      if (i != j) events.push_back({1.0, MoveKind::kDuplicate, i, j});
    }
  }
  if (p.mu > 0.0) {
    for (int i : xi) events.push_back({p.mu, MoveKind::kGround, i, 0});
  }
  return events;
}

std::vector<TransitionEvent> moran_event_list(const TypeVector& x, const ModelParams& p) {
  const auto n = static_cast<int>(x.size());
  std::vector<TransitionEvent> events;
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      if (i != j) events.push_back({1.0, MoveKind::kResample, i, j});
    }
  }
  if (p.mu > 0.0) {
    for (int i = 1; i <= n; ++i) events.push_back({p.mu, MoveKind::kMutate, i, 0});
  }
  return events;
}

TransitionEvent sample_moran_event(const TypeVector& x, const ModelParams& p, Rng& rng) {
  const auto n = static_cast<std::uint64_t>(x.size());
  const double pairs = static_cast<double>(n * (n - 1));
  const double total = pairs + p.mu * static_cast<double>(n);
  if (!(total > 0.0)) throw PreconditionError("sample_moran_event: zero total rate");
  if (rng.uniform() * total < pairs) {
    const std::uint64_t i = rng.below(n);
    std::uint64_t j = rng.below(n - 1);
    if (j >= i) ++j;
    return {1.0, MoveKind::kResample, static_cast<int>(i) + 1, static_cast<int>(j) + 1};
  }
  return {p.mu, MoveKind::kMutate, static_cast<int>(rng.below(n)) + 1, 0};
}

std::vector<TransitionEvent> frequency_events(const FrequencySpectrum& nu, const ModelParams& p) {
  std::vector<TransitionEvent> events;
  const auto& counts = nu.counts();
  for (const auto& [k1, m1] : counts) {
    for (const auto& [k2, m2] : counts) {
      const double rate =
          static_cast<double>(k1) * m1 * k2 * (m2 - (k1 == k2 ? 1 : 0));
      if (rate <= 0.0) continue;
      if (k2 >= 2) {
        events.push_back({rate, MoveKind::kMerge, k1, k2});
      } else {
        events.push_back({rate, MoveKind::kAbsorbSingleton, k1, 1});
      }
    }
  }
  if (p.mu > 0.0) {
    for (const auto& [k, m] : counts) {
      if (k >= 2) events.push_back({p.mu * k * m, MoveKind::kSplitOff, k, 0});
    }
  }
  return events;
}

LabeledGraph apply_event(const LabeledGraph& g, const TransitionEvent& ev) {
  switch (ev.kind) {
    case MoveKind::kPoach: return poach(g, ev.first, ev.second);
    case MoveKind::kSelfEmploy: return self_employ(g, ev.first);
    default: throw PreconditionError("apply_event: move not defined on graphs");
  }
}

AdjacencyMatrix apply_event(const AdjacencyMatrix& a, const TransitionEvent& ev) {
  switch (ev.kind) {
    case MoveKind::kDuplicate: return duplicate(a, ev.first, ev.second);
    case MoveKind::kGround: return ground(a, ev.first);
    default: throw PreconditionError("apply_event: move not defined on adjacency matrices");
  }
}

FrequencySpectrum apply_event(const FrequencySpectrum& nu, const TransitionEvent& ev) {
  switch (ev.kind) {
    case MoveKind::kMerge: {
      if (ev.first == ev.second - 1) return nu;
      std::map<int, int> counts = nu.counts();
      if (--counts[ev.first] < 0 || --counts[ev.second] < 0) {
        throw PreconditionError("apply_event: merge needs blocks of both sizes");
      }
      ++counts[ev.first + 1];
      ++counts[ev.second - 1];
      return FrequencySpectrum(std::move(counts));
    }
    case MoveKind::kAbsorbSingleton: {
      std::map<int, int> counts = nu.counts();
      if (--counts[ev.first] < 0 || --counts[1] < 0) {
        throw PreconditionError("apply_event: absorb needs a singleton and a target block");
      }
      ++counts[ev.first + 1];
      return FrequencySpectrum(std::move(counts));
    }
    case MoveKind::kSplitOff: {
      if (ev.first < 2) return nu;
      std::map<int, int> counts = nu.counts();
      if (--counts[ev.first] < 0) throw PreconditionError("apply_event: no block to split");
      ++counts[1];
      ++counts[ev.first - 1];
      return FrequencySpectrum(std::move(counts));
    }
    default: throw PreconditionError("apply_event: move not defined on spectra");
  }
}

TypeVector apply_event(const TypeVector& x, const TransitionEvent& ev, double fresh_type) {
  const auto n = static_cast<int>(x.size());
  TypeVector out = x;
  switch (ev.kind) {
    case MoveKind::kResample:
      if (ev.first < 1 || ev.first > n || ev.second < 1 || ev.second > n || ev.first == ev.second) {
        throw PreconditionError("apply_event: bad resampling indices");
      }
      out[static_cast<std::size_t>(ev.second - 1)] = x[static_cast<std::size_t>(ev.first - 1)];
      return out;
    case MoveKind::kMutate:
      if (ev.first < 1 || ev.first > n) throw PreconditionError("apply_event: bad mutation index");
      out[static_cast<std::size_t>(ev.first - 1)] = fresh_type;
      return out;
    default: throw PreconditionError("apply_event: move not defined on type vectors");
  }
}

CtmcSpec<LabeledGraph> poaching_spec(const ModelParams& p) {
  p.validate();
  return {[p](const LabeledGraph& g) { return poach_events(g, p); },
          [](const LabeledGraph& g, const TransitionEvent& ev, Rng&) { return apply_event(g, ev); },
          [](const LabeledGraph& g) { return g.key(); }};
}

CtmcSpec<AdjacencyMatrix> adjacency_spec(const ModelParams& p) {
  p.validate();
  return {[p](const AdjacencyMatrix& a) { return adjacency_events(a, p); },
          [](const AdjacencyMatrix& a, const TransitionEvent& ev, Rng&) {
            return apply_event(a, ev);
          },
          [](const AdjacencyMatrix& a) { return a.key(); }};
}

CtmcSpec<TypeVector> moran_spec(const ModelParams& p) {
  p.validate();
  return {[p](const TypeVector& x) { return moran_event_list(x, p); },
          [](const TypeVector& x, const TransitionEvent& ev, Rng& rng) {
            const double fresh = ev.kind == MoveKind::kMutate ? rng.uniform() : 0.0;
            return apply_event(x, ev, fresh);
          },
          [](const TypeVector& x) { return spectrum_of_types(x).key(); }};
}

CtmcSpec<FrequencySpectrum> frequency_spec(const ModelParams& p) {
  p.validate();
  return {[p](const FrequencySpectrum& nu) { return frequency_events(nu, p); },
          [](const FrequencySpectrum& nu, const TransitionEvent& ev, Rng&) {
            return apply_event(nu, ev);
          },
          [](const FrequencySpectrum& nu) { return nu.key(); }};
}

PoachingPartitionChain::PoachingPartitionChain(const std::vector<int>& sizes, double mu)
    : mu_(mu) {
  if (!(mu >= 0.0)) throw PreconditionError("PoachingPartitionChain: mu must be >= 0");
  int v = 0;
  for (int s : sizes) {
    if (s < 1) throw PreconditionError("PoachingPartitionChain: block sizes must be positive");
    const int b = new_block();
    for (int r = 0; r < s; ++r, ++v) {
      block_of_.push_back(b);
      slot_.push_back(static_cast<int>(members_[b].size()));
      members_[b].push_back(v);
    }
    add_size_contribution(s, +1);
  }
  if (v == 0) throw PreconditionError("PoachingPartitionChain: empty population");
}

PoachingPartitionChain PoachingPartitionChain::from_graph(const LabeledGraph& g, double mu) {
  if (!is_complete_components(g)) {
    throw PreconditionError("PoachingPartitionChain: graph must have complete components");
  }
  const auto comps = components(g);
  std::vector<int> sizes;
  for (const auto& c : comps) sizes.push_back(static_cast<int>(c.size()));
  PoachingPartitionChain chain(sizes, mu);
  // Relabel so that vertex v sits in the block of its component.
  int b = 0;
  for (const auto& c : comps) {
    for (std::size_t r = 0; r < c.size(); ++r) {
      chain.block_of_[static_cast<std::size_t>(c[r] - 1)] = b;
      chain.members_[b][r] = c[r] - 1;
      chain.slot_[static_cast<std::size_t>(c[r] - 1)] = static_cast<int>(r);
    }
    ++b;
  }
  return chain;
}

double PoachingPartitionChain::total_rate() const noexcept {
  const double n = static_cast<double>(block_of_.size());
  return n * (n - 1.0) + mu_ * n;
}

int PoachingPartitionChain::new_block() {
  ++live_blocks_;
  if (!free_blocks_.empty()) {
    const int b = free_blocks_.back();
    free_blocks_.pop_back();
    return b;
  }
  members_.emplace_back();
  return static_cast<int>(members_.size()) - 1;
}

void PoachingPartitionChain::add_size_contribution(long long s, int sign) {
  __extension__ __int128 power = 1;
  for (int m = 1; m <= kMaxPower; ++m) {
    power *= s;
    power_sums_[m] += sign > 0 ? power : -power;
  }
}

void PoachingPartitionChain::move_vertex(int v, int target_block) {
  const int source = block_of_[static_cast<std::size_t>(v)];
  auto& src = members_[source];
  const auto src_size = static_cast<long long>(src.size());
  const auto dst_size = static_cast<long long>(members_[target_block].size());
  add_size_contribution(src_size, -1);
  if (src_size > 1) add_size_contribution(src_size - 1, +1);
  if (dst_size > 0) add_size_contribution(dst_size, -1);
  add_size_contribution(dst_size + 1, +1);

  const int slot = slot_[static_cast<std::size_t>(v)];
  const int last = src.back();
  src[static_cast<std::size_t>(slot)] = last;
  slot_[static_cast<std::size_t>(last)] = slot;
  src.pop_back();
  if (src.empty()) {
    free_blocks_.push_back(source);
    --live_blocks_;
  }
  slot_[static_cast<std::size_t>(v)] = static_cast<int>(members_[target_block].size());
  members_[target_block].push_back(v);
  block_of_[static_cast<std::size_t>(v)] = target_block;
}

bool PoachingPartitionChain::apply(const TransitionEvent& ev) {
  const int n = this->n();
  if (ev.kind == MoveKind::kPoach) {
    if (ev.first < 1 || ev.first > n || ev.second < 1 || ev.second > n || ev.first == ev.second) {
      throw PreconditionError("PoachingPartitionChain: bad poach labels");
    }
    const int v1 = ev.first - 1;
    const int v2 = ev.second - 1;
    const int target = block_of_[static_cast<std::size_t>(v1)];
    if (block_of_[static_cast<std::size_t>(v2)] == target) return false;
    move_vertex(v2, target);
    return true;
  }
  if (ev.kind == MoveKind::kSelfEmploy) {
    if (ev.first < 1 || ev.first > n) throw PreconditionError("PoachingPartitionChain: bad label");
    const int v = ev.first - 1;
    if (members_[block_of_[static_cast<std::size_t>(v)]].size() == 1) return false;
    // new_block may grow members_, so take the id before moving.
    const int b = new_block();
    move_vertex(v, b);
    return true;
  }
  throw PreconditionError("PoachingPartitionChain: unsupported move");
}

bool PoachingPartitionChain::step(Rng& rng, TransitionEvent* fired) {
  const auto n = static_cast<std::uint64_t>(block_of_.size());
  const double pairs = static_cast<double>(n * (n - 1));
  TransitionEvent ev;
  if (rng.uniform() * total_rate() < pairs) {
    const std::uint64_t v1 = rng.below(n);
    std::uint64_t v2 = rng.below(n - 1);
    if (v2 >= v1) ++v2;
    ev = {1.0, MoveKind::kPoach, static_cast<int>(v1) + 1, static_cast<int>(v2) + 1};
  } else {
    ev = {mu_, MoveKind::kSelfEmploy, static_cast<int>(rng.below(n)) + 1, 0};
  }
  if (fired != nullptr) *fired = ev;
  return apply(ev);
}

long double PoachingPartitionChain::power_sum(int m) const {
  if (m < 1 || m > kMaxPower) throw PreconditionError("power_sum: m outside 1..8");
  return static_cast<long double>(power_sums_[m]);
}

std::vector<int> PoachingPartitionChain::sizes() const {
  std::vector<int> out;
  for (const auto& m : members_) {
    if (!m.empty()) out.push_back(static_cast<int>(m.size()));
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

FrequencySpectrum PoachingPartitionChain::spectrum() const {
  const auto s = sizes();
  return FrequencySpectrum::from_sizes(s);
}

LabeledGraph PoachingPartitionChain::graph() const {
  std::vector<std::vector<int>> blocks;
  for (const auto& m : members_) {
    if (m.empty()) continue;
    std::vector<int> block;
    for (int v : m) block.push_back(v + 1);
    blocks.push_back(std::move(block));
  }
  return LabeledGraph::from_blocks(n(), blocks);
}

}  // namespace gwf
