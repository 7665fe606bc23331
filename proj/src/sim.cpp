#include "treesic/sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>

namespace treesic {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kNodeBudget = 1'000'000;
constexpr int kDepthBudget = 100'000;

constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

// Split probabilities conditioned on not having chosen an earlier branch,
// so a d-way multinomial reduces to d-1 sequential binomials.  Suffix sums
// keep the fair case exact: for equal probabilities the final conditional
// is exactly 1/2 and takes the popcount path.
struct PreparedConfig {
    int K;
    int d;
    bool sic;
    std::vector<double> cond_p;
};

PreparedConfig prepare(const ProtocolConfig& config) {
    config.validate();
    PreparedConfig pc;
    pc.K = config.K;
    pc.d = config.d;
    pc.sic = config.sic;
    std::vector<double> suffix(config.d);
    suffix[config.d - 1] = config.split_probs[config.d - 1];
    for (int j = config.d - 2; j >= 0; --j)
        suffix[j] = config.split_probs[j] + suffix[j + 1];
    pc.cond_p.resize(config.d - 1);
    for (int j = 0; j + 1 < config.d; ++j)
        pc.cond_p[j] = std::clamp(config.split_probs[j] / suffix[j], 0.0, 1.0);
    return pc;
}

void draw_splits(const PreparedConfig& pc, Rng& rng, int v, int* out) {
    int rem = v;
    for (int j = 0; j + 1 < pc.d; ++j) {
        const int i = rng.binomial(rem, pc.cond_p[j]);
        out[j] = i;
        rem -= i;
    }
    out[pc.d - 1] = rem;
}

// Branches needed before at most K packets remain unresolved.  v > K
// guarantees the prefix condition is met by the final branch.
int groups_needed(const PreparedConfig& pc, int v, const int* splits, int* prefix_out) {
    const int need = v - pc.K;
    int prefix = 0;
    for (int j = 0; j < pc.d; ++j) {
        prefix += splits[j];
        if (prefix >= need) {
            *prefix_out = prefix;
            return j + 1;
        }
    }
    *prefix_out = prefix;
    return pc.d;
}

std::uint64_t count_trial(const PreparedConfig& pc, int n, Rng& rng, int* resolved) {
    std::uint64_t slots = 0;
    std::uint64_t nodes = 0;
    std::vector<int> splits(pc.d);
    std::vector<int> stack;
    stack.reserve(64);
    stack.push_back(n);
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        if (++nodes > kNodeBudget)
            throw convergence_error("simulate_cri: node budget exceeded");
        if (v <= pc.K) {
            slots += 1;
            *resolved += v;
            continue;
        }
        draw_splits(pc, rng, v, splits.data());
        int limit = pc.d;
        if (pc.sic) {
            int prefix = 0;
            const int dmin = groups_needed(pc, v, splits.data(), &prefix);
            if (dmin < pc.d) {
                slots += 1;  // the group left over is decoded by cancellation
                *resolved += v - prefix;
                limit = dmin;
            }
        } else {
            slots += 1;  // the collided group itself spends a slot
        }
        for (int j = limit - 1; j >= 0; --j) stack.push_back(splits[j]);
    }
    return slots;
}

struct TraceContext {
    const PreparedConfig& pc;
    Rng& rng;
    std::uint64_t slots = 0;
    std::uint64_t nodes = 0;
    int resolved = 0;
    std::vector<SlotEvent> events;

    void emit(SlotKind kind, int count, int depth) {
        events.push_back({slots, kind, count, depth});
    }

    // inferred: the receiver already knows this group's multiplicity from
    // its siblings, so the group skips its own slot.
    void process(int v, bool inferred, int depth) {
        if (++nodes > kNodeBudget)
            throw convergence_error("simulate_cri_trace: node budget exceeded");
        if (depth > kDepthBudget)
            throw convergence_error("simulate_cri_trace: depth budget exceeded");
        if (!inferred) {
            slots += 1;
            const SlotKind kind = v == 0 ? SlotKind::Idle
                                 : v <= pc.K ? SlotKind::Success
                                             : SlotKind::Collision;
            emit(kind, v, depth);
            if (v <= pc.K) {
                resolved += v;
                return;
            }
        } else {
            if (v <= pc.K) {
                emit(SlotKind::SkippedSicResolved, v, depth);
                resolved += v;
                return;
            }
            emit(SlotKind::SkippedKnownResidual, v, depth);
        }
        std::vector<int> splits(pc.d);
        draw_splits(pc, rng, v, splits.data());
        if (!pc.sic) {
            for (int j = 0; j < pc.d; ++j) process(splits[j], false, depth + 1);
            return;
        }
        int prefix = 0;
        for (int j = 0; j < pc.d; ++j) {
            const bool last = j + 1 == pc.d;
            process(splits[j], last, depth + 1);
            prefix += splits[j];
            if (!last) {
                const int residual = v - prefix;
                if (residual <= pc.K) {
                    // Receiver cancels the resolved prefix from the stored
                    // collision; what is left decodes without a slot.
                    emit(SlotKind::SkippedSicResolved, residual, depth + 1);
                    resolved += residual;
                    return;
                }
            }
        }
    }
};

int resolve_threads(int threads, std::uint64_t trials) {
    if (threads <= 0) {
        if (const char* env = std::getenv("TREESIC_THREADS")) {
            threads = std::atoi(env);
        }
    }
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
    threads = std::min<std::uint64_t>(threads, trials);
    return std::max(threads, 1);
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) {
    state += kGolden;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) {
    // splitmix64 state after `index` steps is master + index * kGolden, so
    // per-trial seeds sample the master stream without walking it.
    std::uint64_t state = master + index * kGolden;
    return splitmix64(state);
}

Rng::Rng(std::uint64_t seed) {
    for (auto& word : s_) word = splitmix64(seed);
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = kGolden;
}

std::uint64_t Rng::next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform01() {
    return (next() >> 11) * 0x1.0p-53;
}

int Rng::binomial_half(int n) {
    if (n < 0) throw std::invalid_argument("binomial_half: n must be >= 0");
    int c = 0;
    while (n >= 64) {
        c += std::popcount(next());
        n -= 64;
    }
    if (n > 0) c += std::popcount(next() >> (64 - n));
    return c;
}

int Rng::binomial(int n, double p) {
    if (n < 0) throw std::invalid_argument("binomial: n must be >= 0");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binomial: p outside [0, 1]");
    if (n == 0) return 0;  // no draw, keeping streams aligned across paths
    if (p == 0.0) return 0;
    if (p == 1.0) return n;
    if (p == 0.5) return binomial_half(n);

    // Inversion from the mode outward: expected O(sqrt(np(1-p))) pmf steps.
    const double U = uniform01();
    int mode = std::min(static_cast<int>((n + 1) * p), n);
    const double lpm = std::lgamma(n + 1.0) - std::lgamma(mode + 1.0) -
                       std::lgamma(n - mode + 1.0) + mode * std::log(p) +
                       (n - mode) * std::log1p(-p);
    double cum = std::exp(lpm);
    if (U < cum) return mode;
    int lo = mode, hi = mode;
    double plo = cum, phi = cum;
    const double up = p / (1.0 - p);
    const double down = (1.0 - p) / p;
    while (lo > 0 || hi < n) {
        const double pl = lo > 0 ? plo * lo / (n - lo + 1.0) * down : 0.0;
        const double ph = hi < n ? phi * (n - hi) / (hi + 1.0) * up : 0.0;
        if (ph >= pl) {
            if (ph == 0.0) break;  // both tails underflowed
            ++hi;
            phi = ph;
            cum += ph;
            if (U < cum) return hi;
        } else {
            --lo;
            plo = pl;
            cum += pl;
            if (U < cum) return lo;
        }
    }
    return hi;
}

int Rng::poisson(double mean) {
    if (!(mean >= 0.0)) throw std::invalid_argument("poisson: mean must be >= 0");
    if (mean == 0.0) return 0;
    const double U = uniform01();
    const int mode = static_cast<int>(mean);
    double cum = std::exp(mode * std::log(mean) - mean - std::lgamma(mode + 1.0));
    if (U < cum) return mode;
    int lo = mode, hi = mode;
    double plo = cum, phi = cum;
    const int hi_max = static_cast<int>(mean + 15.0 * std::sqrt(mean) + 80.0);
    while (lo > 0 || hi < hi_max) {
        const double pl = lo > 0 ? plo * lo / mean : 0.0;
        const double ph = hi < hi_max ? phi * mean / (hi + 1.0) : 0.0;
        if (ph >= pl) {
            if (ph == 0.0) break;
            ++hi;
            phi = ph;
            cum += ph;
            if (U < cum) return hi;
        } else {
            --lo;
            plo = pl;
            cum += pl;
            if (U < cum) return lo;
        }
    }
    return hi;
}

const char* to_string(SlotKind kind) {
    switch (kind) {
        case SlotKind::Idle: return "idle";
        case SlotKind::Success: return "success";
        case SlotKind::Collision: return "collision";
        case SlotKind::SkippedSicResolved: return "skipped-sic";
        case SlotKind::SkippedKnownResidual: return "skipped-residual";
    }
    return "?";
}

TrialOutcome simulate_cri(const ProtocolConfig& config, int n, std::uint64_t seed) {
    if (n < 0) throw std::invalid_argument("simulate_cri: n must be >= 0");
    const PreparedConfig pc = prepare(config);
    Rng rng(seed);
    TrialOutcome out;
    out.n = n;
    out.seed = seed;
    int resolved = 0;
    out.slots = count_trial(pc, n, rng, &resolved);
    out.resolved = resolved;
    return out;
}

std::pair<TrialOutcome, std::vector<SlotEvent>> simulate_cri_trace(
    const ProtocolConfig& config, int n, std::uint64_t seed) {
    if (n < 0) throw std::invalid_argument("simulate_cri_trace: n must be >= 0");
    const PreparedConfig pc = prepare(config);
    Rng rng(seed);
    TraceContext ctx{pc, rng, 0, 0, 0, {}};
    ctx.process(n, false, 0);
    TrialOutcome out;
    out.n = n;
    out.seed = seed;
    out.slots = ctx.slots;
    out.resolved = ctx.resolved;
    return {out, std::move(ctx.events)};
}

std::uint64_t cri_with_root_split(const ProtocolConfig& config,
                                  const std::vector<int>& root_split) {
    const PreparedConfig pc = prepare(config);
    if (root_split.size() != static_cast<size_t>(pc.d))
        throw std::invalid_argument("cri_with_root_split: need one entry per branch");
    int n = 0;
    for (int c : root_split) {
        if (c < 0) throw std::invalid_argument("cri_with_root_split: negative group");
        if (c > pc.K)
            throw std::invalid_argument(
                "cri_with_root_split: every child group must resolve in one slot");
        n += c;
    }
    if (n <= pc.K)
        throw std::invalid_argument("cri_with_root_split: root must collide (n > K)");
    if (!pc.sic) return 1 + static_cast<std::uint64_t>(pc.d);
    int prefix = 0;
    const int dmin = groups_needed(pc, n, root_split.data(), &prefix);
    return static_cast<std::uint64_t>(dmin) + (dmin < pc.d ? 1 : 0);
}

MonteCarloStats monte_carlo(const ProtocolConfig& config, int n,
                            std::uint64_t trials, std::uint64_t master_seed,
                            int threads) {
    if (n < 0) throw std::invalid_argument("monte_carlo: n must be >= 0");
    if (trials < 1) throw std::invalid_argument("monte_carlo: trials must be >= 1");
    const PreparedConfig pc = prepare(config);
    const int T = resolve_threads(threads, trials);

    std::vector<std::uint64_t> sums(T, 0);
    std::vector<unsigned __int128> sqs(T, 0);
    std::vector<std::exception_ptr> errors(T);
    auto worker = [&](int t, std::uint64_t lo, std::uint64_t hi) {
        try {
            std::uint64_t sum = 0;
            unsigned __int128 sq = 0;
            for (std::uint64_t idx = lo; idx < hi; ++idx) {
                Rng rng(mix_seed(master_seed, idx));
                int resolved = 0;
                const std::uint64_t slots = count_trial(pc, n, rng, &resolved);
                if (resolved != n)
                    throw std::runtime_error("monte_carlo: trial lost packets");
                sum += slots;
                sq += static_cast<unsigned __int128>(slots) * slots;
            }
            sums[t] = sum;
            sqs[t] = sq;
        } catch (...) {
            errors[t] = std::current_exception();
        }
    };

    const std::uint64_t chunk = trials / T;
    const std::uint64_t extra = trials % T;
    std::vector<std::thread> pool;
    std::uint64_t lo = 0;
    for (int t = 0; t < T; ++t) {
        const std::uint64_t hi = lo + chunk + (static_cast<std::uint64_t>(t) < extra ? 1 : 0);
        pool.emplace_back(worker, t, lo, hi);
        lo = hi;
    }
    for (auto& th : pool) th.join();
    for (auto& err : errors)
        if (err) std::rethrow_exception(err);

    std::uint64_t sum = 0;
    unsigned __int128 sq = 0;
    for (int t = 0; t < T; ++t) {
        sum += sums[t];
        sq += sqs[t];
    }

    MonteCarloStats stats;
    stats.trials = trials;
    stats.mean_slots = static_cast<double>(sum) / trials;
    if (trials > 1) {
        // Exact integer numerator keeps the variance deterministic.
        const unsigned __int128 num =
            sq * trials - static_cast<unsigned __int128>(sum) * sum;
        const double var =
            static_cast<double>(num) / trials / static_cast<double>(trials - 1);
        stats.std_dev = std::sqrt(var);
        stats.ci95_half_width = 1.96 * stats.std_dev / std::sqrt(static_cast<double>(trials));
    }
    stats.throughput = n / (pc.K * stats.mean_slots);
    return stats;
}

std::pair<std::uint64_t, std::uint64_t> coupled_sic_comparison(int n, int K,
                                                               double p,
                                                               std::uint64_t seed) {
    if (n < 0) throw std::invalid_argument("coupled_sic_comparison: n must be >= 0");
    if (K < 1) throw std::invalid_argument("coupled_sic_comparison: K must be >= 1");
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("coupled_sic_comparison: p outside (0, 1)");
    Rng rng(seed);
    // One shared splitting tree; with cancellation the CRI length is the
    // leaf count, without it every internal node costs one extra slot.
    std::uint64_t leaves = 0;
    std::uint64_t internals = 0;
    std::uint64_t nodes = 0;
    std::vector<int> stack{n};
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        if (++nodes > kNodeBudget)
            throw convergence_error("coupled_sic_comparison: node budget exceeded");
        if (v <= K) {
            leaves += 1;
            continue;
        }
        internals += 1;
        const int i = rng.binomial(v, p);
        stack.push_back(v - i);
        stack.push_back(i);
    }
    return {leaves, leaves + internals};
}

WindowedSimStats simulate_windowed(const ProtocolConfig& config, double lambda,
                                   double delta, std::uint64_t windows,
                                   std::uint64_t seed) {
    if (!(lambda > 0.0)) throw std::invalid_argument("simulate_windowed: lambda must be > 0");
    if (!(delta > 0.0)) throw std::invalid_argument("simulate_windowed: delta must be > 0");
    if (windows < 1) throw std::invalid_argument("simulate_windowed: windows must be >= 1");
    const PreparedConfig pc = prepare(config);

    double end = 0.0;     // absolute slot time the current CRI finishes
    double sum_wait = 0.0;
    std::uint64_t sum_cri = 0;
    for (std::uint64_t w = 0; w < windows; ++w) {
        Rng rng(mix_seed(seed, w));
        const int arrivals = rng.poisson(lambda * delta);
        int resolved = 0;
        const std::uint64_t slots = count_trial(pc, arrivals, rng, &resolved);
        const double available = (w + 1) * delta;  // window w closes here
        const double start = std::max(end, available);
        sum_wait += start - available;
        end = start + static_cast<double>(slots);
        sum_cri += slots;
    }

    WindowedSimStats stats;
    stats.windows = windows;
    stats.lambda = lambda;
    stats.delta = delta;
    stats.mean_cri = static_cast<double>(sum_cri) / windows;
    stats.mean_wait = sum_wait / windows;
    stats.drift = stats.mean_cri - delta;
    return stats;
}

}  // namespace treesic
