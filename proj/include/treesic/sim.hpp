#pragma once
// Slot-exact Monte Carlo simulation of tree splitting collision resolution
// on a K-packet reception channel, with and without successive interference
// cancellation, for binary and d-ary splitting.
//
// Determinism contract: a given (config, n, seed) triple always produces the
// same outcome for the same build, independent of thread count.  Trials are
// seeded by jump-ahead sampling of a splitmix64 stream, and aggregation uses
// integer accumulators so the reduction order cannot matter.

#include <cstdint>
#include <utility>
#include <vector>

#include "treesic/cri.hpp"

namespace treesic {

std::uint64_t splitmix64(std::uint64_t& state);
// Seed for trial `index` of a run keyed by `master`.
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index);

// xoshiro256** with splitmix64 seeding.
class Rng {
  public:
    explicit Rng(std::uint64_t seed);
    std::uint64_t next();
    double uniform01();  // [0, 1), 53-bit
    int binomial(int n, double p);
    int binomial_half(int n);  // p = 1/2 via popcount
    int poisson(double mean);

  private:
    std::uint64_t s_[4];
};

struct TrialOutcome {
    int n = 0;
    std::uint64_t slots = 0;
    int resolved = 0;  // packets decoded; equals n on completion
    std::uint64_t seed = 0;
};

enum class SlotKind {
    Idle,
    Success,             // 1..K packets decoded in the slot
    Collision,           // more than K packets, nothing decoded
    SkippedSicResolved,  // residual group decoded by cancellation, no slot
    SkippedKnownResidual  // group inferred from its siblings, no root slot
};
const char* to_string(SlotKind kind);

struct SlotEvent {
    std::uint64_t index = 0;  // counted slots so far; skips do not advance it
    SlotKind kind = SlotKind::Idle;
    int count = 0;  // packets in the group
    int depth = 0;  // tree depth, root = 0
};

struct MonteCarloStats {
    std::uint64_t trials = 0;
    double mean_slots = 0;
    double std_dev = 0;
    double ci95_half_width = 0;
    double throughput = 0;  // n / (K * mean_slots)
};

struct WindowedSimStats {
    std::uint64_t windows = 0;
    double lambda = 0;
    double delta = 0;
    double mean_cri = 0;
    double mean_wait = 0;   // slots a window waits beyond its release time
    double drift = 0;       // mean_cri - delta; <= 0 indicates stability
};

TrialOutcome simulate_cri(const ProtocolConfig& config, int n, std::uint64_t seed);

// Same draws and totals as simulate_cri, plus the per-slot event log.
std::pair<TrialOutcome, std::vector<SlotEvent>> simulate_cri_trace(
    const ProtocolConfig& config, int n, std::uint64_t seed);

// CRI length when the root split is forced to `root_split` (one entry per
// branch); every child group must resolve in a single slot.
std::uint64_t cri_with_root_split(const ProtocolConfig& config,
                                  const std::vector<int>& root_split);

// threads = 0: use TREESIC_THREADS if set, else the hardware count.
MonteCarloStats monte_carlo(const ProtocolConfig& config, int n,
                            std::uint64_t trials, std::uint64_t master_seed,
                            int threads = 0);

// One tree, two receivers: resolve the same binary splitting tree with and
// without cancellation.  Returns {slots_sic, slots_no_sic}.
std::pair<std::uint64_t, std::uint64_t> coupled_sic_comparison(int n, int K,
                                                               double p,
                                                               std::uint64_t seed);

WindowedSimStats simulate_windowed(const ProtocolConfig& config, double lambda,
                                   double delta, std::uint64_t windows,
                                   std::uint64_t seed);

}  // namespace treesic
