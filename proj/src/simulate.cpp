#include <algorithm>
#include <cmath>
#include <thread>

#include "gltl/error.hpp"
#include "gltl/solver.hpp"

namespace gltl {

namespace {

// splitmix64: a 64-bit state is enough for one short episode and makes
// per-episode seeding essentially free, unlike the 312-word Mersenne Twister.
class EpisodeStream {
 public:
  EpisodeStream(std::uint64_t seed, std::uint64_t index) : state_(seed) {
    state_ = next() ^ index;
    next();
  }

  // Uniform on [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  int sample(const Distribution& d) {
    double u = uniform();
    for (const auto& o : d) {
      if (u < o.prob) return o.target;
      u -= o.prob;
    }
    return d.back().target;
  }

 private:
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace

Episode simulate_episode(const ProductMdp& p, const Policy& pi, std::uint64_t seed,
                         std::uint64_t index, std::size_t max_steps, bool record) {
  const SpecMdp& spec = p.spec();
  const LabeledMdp& env = p.env();
  EpisodeStream rng(seed, index);
  Episode ep;

  int s = env.initial;
  int q = rng.sample(p.spec_step(spec.initial(), s));
  if (record) ep.trajectory.push_back({s, q, -1});
  while (true) {
    if (q == spec.accept()) {
      ep.outcome = EpisodeOutcome::kAccepted;
      break;
    }
    if (q == spec.reject()) {
      ep.outcome = EpisodeOutcome::kRejected;
      break;
    }
    if (ep.steps >= max_steps) {
      ep.outcome = EpisodeOutcome::kCensored;
      break;
    }
    const int x = p.index_of(s, q);
    if (x < 0) throw Error(ErrorCode::kInvalidArgument, "simulation left the materialized product");
    const int a = pi.actions.at(x);
    if (record) ep.trajectory.back().action = a;
    s = rng.sample(env.transitions[s].at(a));
    q = rng.sample(p.spec_step(q, s));
    ++ep.steps;
    if (record) ep.trajectory.push_back({s, q, -1});
  }
  return ep;
}

SimulationReport simulate(const ProductMdp& p, const Policy& pi, const SimulationOptions& opt) {
  if (opt.episodes == 0) throw Error(ErrorCode::kInvalidArgument, "episodes must be at least 1");
  if (pi.actions.size() != p.num_states()) {
    throw Error(ErrorCode::kInvalidArgument, "policy does not match product");
  }
  const unsigned workers =
      static_cast<unsigned>(std::clamp<std::size_t>(opt.workers, 1, opt.episodes));

  struct Tally {
    std::size_t accepted = 0, rejected = 0, censored = 0;
  };
  std::vector<Tally> tallies(workers);
  SimulationReport report;
  report.episodes = opt.episodes;
  report.examples.resize(std::min(opt.examples, opt.episodes));

  auto run = [&](unsigned w) {
    Tally& t = tallies[w];
    for (std::size_t i = w; i < opt.episodes; i += workers) {
      const bool record = i < report.examples.size();
      Episode ep = simulate_episode(p, pi, opt.seed, i, opt.max_steps, record);
      switch (ep.outcome) {
        case EpisodeOutcome::kAccepted: ++t.accepted; break;
        case EpisodeOutcome::kRejected: ++t.rejected; break;
        case EpisodeOutcome::kCensored: ++t.censored; break;
      }
      if (record) report.examples[i] = std::move(ep);
    }
  };

  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& th : pool) th.join();
  }

  for (const auto& t : tallies) {
    report.accepted += t.accepted;
    report.rejected += t.rejected;
    report.censored += t.censored;
  }
  const double n = static_cast<double>(report.episodes);
  report.rate = static_cast<double>(report.accepted) / n;
  report.half_width = 3.0 * std::sqrt(report.rate * (1.0 - report.rate) / n);
  return report;
}

}  // namespace gltl
