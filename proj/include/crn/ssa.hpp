#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "crn/network.hpp"

namespace crn {

/// Counter-based generator "smix64ctr/v1": output i is the SplitMix64
/// finalizer applied to key + i * golden ratio. Splittable by deriving
/// per-stream keys, so ensembles are independent of thread scheduling.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  static constexpr const char* name() { return "smix64ctr/v1"; }

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

  static std::uint64_t derive(std::uint64_t master, std::uint64_t index) {
    return mix(master ^ mix(index + 0x9E3779B97F4A7C15ULL));
  }

  std::uint64_t next_u64() {
    return mix(key_ + 0x9E3779B97F4A7C15ULL * ++counter_);
  }

  /// Uniform in (0, 1].
  double next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

struct Trajectory {
  std::vector<double> times;                    // jump times, starting at 0
  std::vector<std::vector<long long>> states;   // state after each jump
  std::uint64_t seed = 0;

  const std::vector<long long>& state_at(double t) const;
};

/// Gillespie direct method with exact binomial-product propensities.
Trajectory ssa_run(const ReactionNetwork& net, const std::vector<long long>& k0,
                   double horizon, std::uint64_t seed);

struct SsaEnsemble {
  std::vector<double> sample_times;
  // samples[trajectory][time_index][species]
  std::vector<std::vector<std::vector<long long>>> samples;
  std::uint64_t master_seed = 0;
};

/// Per-trajectory seed = CounterRng::derive(master_seed, index); the result
/// is byte-identical regardless of thread count.
SsaEnsemble ssa_ensemble(const ReactionNetwork& net,
                         const std::vector<long long>& k0,
                         const std::vector<double>& sample_times,
                         std::size_t n_trajectories, std::uint64_t master_seed,
                         std::size_t n_threads = 0);

struct MomentEstimate {
  double value = 0;
  double standard_error = 0;
};

MomentEstimate estimate_moment(const SsaEnsemble& ens, const MultiIndex& u,
                               std::size_t time_index);

std::map<std::vector<long long>, double> estimate_distribution(
    const SsaEnsemble& ens, std::size_t time_index);

/// Burn-in heuristic: 20 / (min degradation rate), falling back to
/// 20 / (min rate) when the network has no pure degradations.
double default_horizon(const ReactionNetwork& net);

}  // namespace crn
