#include "crn/ssa.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace crn {

const std::vector<long long>& Trajectory::state_at(double t) const {
  std::size_t lo = 0;
  // last jump time <= t
  auto it = std::upper_bound(times.begin(), times.end(), t);
  lo = static_cast<std::size_t>(it - times.begin());
  if (lo == 0) return states.front();
  return states[lo - 1];
}

namespace {

struct CompiledReaction {
  double rate;                                    // kappa_j
  std::vector<std::pair<std::size_t, int>> srcs;  // (species, a_ij > 0)
  std::vector<std::pair<std::size_t, int>> deltas;
};

std::vector<CompiledReaction> compile(const ReactionNetwork& net) {
  std::vector<CompiledReaction> out;
  for (const auto& r : net.reactions) {
    CompiledReaction cr;
    cr.rate = to_double(r.rate);
    auto g = r.change();
    for (std::size_t i = 0; i < net.n_species(); ++i) {
      if (r.source[i] > 0) cr.srcs.emplace_back(i, r.source[i]);
      if (g[i] != 0) cr.deltas.emplace_back(i, g[i]);
    }
    out.push_back(std::move(cr));
  }
  return out;
}

// kappa_j * prod C(k_i, a_ij), zero when any k_i < a_ij (Heaviside guard).
double propensity(const CompiledReaction& r, const std::vector<long long>& k) {
  double p = r.rate;
  for (const auto& [i, a] : r.srcs) {
    long long ki = k[i];
    if (ki < a) return 0.0;
    for (int t = 0; t < a; ++t) p *= static_cast<double>(ki - t) / (t + 1);
  }
  return p;
}

// Core loop shared by ssa_run and the ensemble driver. on_jump is called
// after every state change with the new time.
template <typename OnJump>
void run_direct(const std::vector<CompiledReaction>& reactions,
                std::vector<long long>& k, double horizon, CounterRng& rng,
                OnJump&& on_jump) {
  double t = 0.0;
  std::vector<double> props(reactions.size());
  while (true) {
    double total = 0.0;
    for (std::size_t j = 0; j < reactions.size(); ++j) {
      props[j] = propensity(reactions[j], k);
      total += props[j];
    }
    if (total <= 0.0) return;  // absorbing state
    t += -std::log(rng.next_unit()) / total;
    if (t > horizon) return;
    double pick = rng.next_unit() * total;
    std::size_t j = 0;
    for (; j + 1 < reactions.size(); ++j) {
      if (pick <= props[j]) break;
      pick -= props[j];
    }
    for (const auto& [i, d] : reactions[j].deltas) k[i] += d;
    on_jump(t);
  }
}

}  // namespace

Trajectory ssa_run(const ReactionNetwork& net, const std::vector<long long>& k0,
                   double horizon, std::uint64_t seed) {
  net.validate();
  for (long long v : k0)
    if (v < 0) throw CrnError("negative initial count");
  auto reactions = compile(net);
  Trajectory traj;
  traj.seed = seed;
  traj.times.push_back(0.0);
  traj.states.push_back(k0);
  std::vector<long long> k = k0;
  CounterRng rng(seed);
  run_direct(reactions, k, horizon, rng, [&](double t) {
    traj.times.push_back(t);
    traj.states.push_back(k);
  });
  // final snapshot at the horizon
  traj.times.push_back(horizon);
  traj.states.push_back(k);
  return traj;
}

SsaEnsemble ssa_ensemble(const ReactionNetwork& net,
                         const std::vector<long long>& k0,
                         const std::vector<double>& sample_times,
                         std::size_t n_trajectories, std::uint64_t master_seed,
                         std::size_t n_threads) {
  net.validate();
  auto reactions = compile(net);
  SsaEnsemble ens;
  ens.sample_times = sample_times;
  ens.master_seed = master_seed;
  ens.samples.resize(n_trajectories);
  double horizon = sample_times.empty() ? 0.0 : sample_times.back();

  auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin; idx < end; ++idx) {
      CounterRng rng(CounterRng::derive(master_seed, idx));
      std::vector<long long> k = k0;
      std::vector<std::vector<long long>> snaps;
      snaps.reserve(sample_times.size());
      std::size_t next_sample = 0;
      std::vector<long long> prev = k;
      run_direct(reactions, k, horizon, rng, [&](double t) {
        // samples strictly before this jump see the previous state
        while (next_sample < sample_times.size() && sample_times[next_sample] < t) {
          snaps.push_back(prev);
          ++next_sample;
        }
        prev = k;
      });
      while (next_sample < sample_times.size()) {
        snaps.push_back(k);
        ++next_sample;
      }
      ens.samples[idx] = std::move(snaps);
    }
  };

  if (n_threads == 0) n_threads = std::thread::hardware_concurrency();
  if (n_threads <= 1 || n_trajectories < 2 * n_threads) {
    run_range(0, n_trajectories);
  } else {
    std::vector<std::thread> pool;
    std::size_t chunk = (n_trajectories + n_threads - 1) / n_threads;
    for (std::size_t t = 0; t < n_threads; ++t) {
      std::size_t b = t * chunk, e = std::min(n_trajectories, b + chunk);
      if (b >= e) break;
      pool.emplace_back(run_range, b, e);
    }
    for (auto& th : pool) th.join();
  }
  return ens;
}

MomentEstimate estimate_moment(const SsaEnsemble& ens, const MultiIndex& u,
                               std::size_t time_index) {
  if (ens.samples.empty()) throw CrnError("empty ensemble");
  double sum = 0, sumsq = 0;
  for (const auto& traj : ens.samples) {
    const auto& k = traj.at(time_index);
    double v = 1;
    for (std::size_t i = 0; i < u.size(); ++i)
      for (int t = 0; t < u[i]; ++t) v *= static_cast<double>(k[i]);
    sum += v;
    sumsq += v * v;
  }
  double n = static_cast<double>(ens.samples.size());
  MomentEstimate est;
  est.value = sum / n;
  double var = std::max(0.0, sumsq / n - est.value * est.value);
  est.standard_error = n > 1 ? std::sqrt(var / (n - 1)) : 0.0;
  return est;
}

std::map<std::vector<long long>, double> estimate_distribution(
    const SsaEnsemble& ens, std::size_t time_index) {
  std::map<std::vector<long long>, double> freq;
  for (const auto& traj : ens.samples) freq[traj.at(time_index)] += 1.0;
  for (auto& [k, f] : freq) f /= static_cast<double>(ens.samples.size());
  return freq;
}

double default_horizon(const ReactionNetwork& net) {
  double min_deg = 0, min_rate = 0;
  bool has_deg = false, has_rate = false;
  for (const auto& r : net.reactions) {
    double rate = to_double(r.rate);
    if (!has_rate || rate < min_rate) {
      min_rate = rate;
      has_rate = true;
    }
    if (r.is_degradation() && (!has_deg || rate < min_deg)) {
      min_deg = rate;
      has_deg = true;
    }
  }
  if (has_deg) return 20.0 / min_deg;
  if (has_rate) return 20.0 / min_rate;
  return 20.0;
}

}  // namespace crn
