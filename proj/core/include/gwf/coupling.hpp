#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gwf/chains.hpp"
#include "gwf/graph.hpp"

namespace gwf {

// Driving randomness shared by the poaching chain and the Moran model.
struct DrivingNoise {
  int n = 1;
  double mu = 0.0;
  double t_end = 0.0;
  std::uint64_t seed = 0;
  // pi1[(i-1)*n + (j-1)]: rate-1 event times at which i replaces the type of j.
  std::vector<std::vector<double>> pi1;
  // Mutation marks (individual, time), sorted by time.
  std::vector<std::pair<int, double>> pi2;

  const std::vector<double>& pair_times(int i, int j) const {
    return pi1[static_cast<std::size_t>((i - 1) * n + (j - 1))];
  }
  // K_i(m): the type individual i takes at its m-th mutation (m >= 1).
  double k_type(int i, std::uint64_t m) const;
};

DrivingNoise generate_noise(int n, double mu, double t_end, std::uint64_t seed);

enum class NoiseSource { kPairs = 1, kMutations = 2 };

struct NoiseMark {
  double time = 0.0;
  NoiseSource source = NoiseSource::kPairs;
  int i = 0;
  int j = 0;  // pairs only
};

// All marks ordered by (time, source, i, j).
std::vector<NoiseMark> ordered_marks(const DrivingNoise& noise);

struct CoupledStep {
  double time = 0.0;
  MoveKind kind = MoveKind::kResample;
  int i = 0;
  int j = 0;
  std::string graph_spectrum_key;
  std::string type_spectrum_key;
  bool invariant_ok = true;
};

struct CoupledPaths {
  // States after every mark; both paths share jump_times.
  SamplePath<LabeledGraph> graph;
  SamplePath<TypeVector> types;
  std::vector<int> gamma;      // vertex v -> individual gamma[v-1]
  std::vector<int> gamma_inv;  // individual i -> vertex gamma_inv[i-1]
  std::vector<CoupledStep> trace;
};

// Vertex-to-individual bijection matching components of g0 to type classes
// of y0 with equal sizes (both taken in sorted order).
std::vector<int> coupling_bijection(const LabeledGraph& g0, const TypeVector& y0);

CoupledPaths coupled_paths(const LabeledGraph& g0, const TypeVector& y0,
                           const DrivingNoise& noise);

struct InvariantCheck {
  bool ok = true;
  double first_violation_time = 0.0;
  std::size_t checked = 0;
};

// Spectrum equality at t = 0, after every mark, and at t_end.
InvariantCheck verify_coupling_invariant(const CoupledPaths& paths);

// Types at time t rebuilt from earliest ancestors (n <= 10): an ancestor at
// time 0 passes on y0, otherwise the ancestor's own mutation count selects K.
TypeVector ancestor_trace_types(const TypeVector& y0, const DrivingNoise& noise, double t);

}  // namespace gwf
