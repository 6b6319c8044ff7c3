#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "gwf/errors.hpp"
#include "gwf/graph.hpp"
#include "gwf/rng.hpp"

namespace gwf {

enum class MoveKind {
  kPoach,            // graph: (v1, v2)
  kSelfEmploy,       // graph: v
  kDuplicate,        // adjacency: (i, j)
  kGround,           // adjacency: i
  kResample,         // types: individual j takes the type of i
  kMutate,           // types: individual i gets a fresh uniform type
  kMerge,            // spectrum: a block of size `second` (>= 2) gives one to a block of size `first`
  kAbsorbSingleton,  // spectrum: a singleton joins a block of size `first`
  kSplitOff,         // spectrum: a block of size `first` (>= 2) sheds a singleton
};

const char* to_string(MoveKind kind) noexcept;

struct TransitionEvent {
  double rate = 0.0;
  MoveKind kind = MoveKind::kPoach;
  int first = 0;
  int second = 0;
};

double total_rate(const std::vector<TransitionEvent>& events) noexcept;

std::vector<TransitionEvent> poach_events(const LabeledGraph& g, const ModelParams& p);
std::vector<TransitionEvent> adjacency_events(const AdjacencyMatrix& a, const ModelParams& p);
// Resampling per ordered pair at rate 1 and mutation per individual at rate mu.
std::vector<TransitionEvent> moran_event_list(const TypeVector& x, const ModelParams& p);
std::vector<TransitionEvent> frequency_events(const FrequencySpectrum& nu, const ModelParams& p);

// Draws one Moran event proportionally to its rate without materializing
// the event list.
TransitionEvent sample_moran_event(const TypeVector& x, const ModelParams& p, Rng& rng);

LabeledGraph apply_event(const LabeledGraph& g, const TransitionEvent& ev);
AdjacencyMatrix apply_event(const AdjacencyMatrix& a, const TransitionEvent& ev);
FrequencySpectrum apply_event(const FrequencySpectrum& nu, const TransitionEvent& ev);
// `fresh_type` is used by kMutate only.
TypeVector apply_event(const TypeVector& x, const TransitionEvent& ev, double fresh_type);

template <class State>
struct SamplePath {
  std::vector<double> jump_times;
  std::vector<State> states;
  std::uint64_t seed = 0;
  double t_end = 0.0;

  const State& state_at(double t) const {
    std::size_t idx = 0;
    while (idx < jump_times.size() && jump_times[idx] <= t) ++idx;
    return states[idx];
  }
};

template <class State>
struct CtmcSpec {
  std::function<std::vector<TransitionEvent>(const State&)> events;
  // Applies an event; the generator is available for moves that need fresh
  // randomness at application time.
  std::function<State(const State&, const TransitionEvent&, Rng&)> apply;
  std::function<std::string(const State&)> key;
};

CtmcSpec<LabeledGraph> poaching_spec(const ModelParams& p);
CtmcSpec<AdjacencyMatrix> adjacency_spec(const ModelParams& p);
CtmcSpec<TypeVector> moran_spec(const ModelParams& p);
CtmcSpec<FrequencySpectrum> frequency_spec(const ModelParams& p);

// Exact Gillespie simulation. Events whose application leaves the state
// unchanged are consumed (they shorten holding times) but not recorded.
template <class State>
SamplePath<State> simulate(const CtmcSpec<State>& spec, const State& init, double t_end,
                           std::uint64_t seed, std::uint64_t stream = 0) {
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
    throw PreconditionError("simulate: t_end must be finite and >= 0");
  }
  SamplePath<State> path;
  path.seed = seed;
  path.t_end = t_end;
  path.states.push_back(init);
  Rng rng(seed, stream);
  double t = 0.0;
  State current = init;
  while (true) {
    const std::vector<TransitionEvent> events = spec.events(current);
    const double total = total_rate(events);
    if (!(total > 0.0)) break;
    t += rng.exponential(total);
    if (t > t_end) break;
    double target = rng.uniform() * total;
    std::size_t pick = 0;
    for (; pick + 1 < events.size(); ++pick) {
      target -= events[pick].rate;
      if (target < 0.0) break;
    }
    State next = spec.apply(current, events[pick], rng);
    if (next == current) continue;
    current = std::move(next);
    path.jump_times.push_back(t);
    path.states.push_back(current);
  }
  return path;
}

// Poaching chain restricted to complete-component graphs, stored as a
// partition of the vertices. Every ordered pair and every vertex fires at a
// uniform rate, so events are sampled directly in O(1) and the integer
// power sums S_m = sum over blocks of size^m are maintained incrementally.
class PoachingPartitionChain {
 public:
  static constexpr int kMaxPower = 8;

  PoachingPartitionChain(const std::vector<int>& sizes, double mu);
  static PoachingPartitionChain from_graph(const LabeledGraph& g, double mu);

  int n() const noexcept { return static_cast<int>(block_of_.size()); }
  double mu() const noexcept { return mu_; }
  double total_rate() const noexcept;

  // Draws the next event; returns false when it leaves the state unchanged.
  bool step(Rng& rng, TransitionEvent* fired = nullptr);
  // Applies a poach (v1, v2) or self-employment (v) with 1-based labels.
  bool apply(const TransitionEvent& ev);

  // S_m for 1 <= m <= kMaxPower.
  long double power_sum(int m) const;
  int block_count() const noexcept { return live_blocks_; }
  std::vector<int> sizes() const;  // non-increasing
  FrequencySpectrum spectrum() const;
  LabeledGraph graph() const;
  int block_of(int v) const { return block_of_[static_cast<std::size_t>(v - 1)]; }

 private:
  void move_vertex(int v, int target_block);
  int new_block();
  void add_size_contribution(long long s, int sign);

  double mu_;
  std::vector<int> block_of_;                  // vertex (0-based) -> block id
  std::vector<std::vector<int>> members_;      // block id -> vertices (0-based)
  std::vector<int> slot_;                      // vertex -> index in members_
  std::vector<int> free_blocks_;
  int live_blocks_ = 0;
  __extension__ __int128 power_sums_[kMaxPower + 1] = {};
};

}  // namespace gwf
