#include "rwreset/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <thread>

namespace rwreset {

const char* to_string(EventKind e) {
    switch (e) {
        case EventKind::Step: return "step";
        case EventKind::Reset: return "reset";
        case EventKind::Kill: return "kill";
    }
    return "step";
}

namespace {

__extension__ using int128 = __int128;

// Runs body(k, acc) for k in [0, trials) on contiguous blocks, one accumulator
// per worker, and merges them. Accumulators hold integers, so the result does
// not depend on the block layout.
template <class Acc, class Body>
Acc run_trials(std::int64_t trials, const Acc& zero, Body body) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const auto workers = static_cast<std::int64_t>(std::min<std::int64_t>(hw, std::max<std::int64_t>(1, trials / 1000)));
    std::vector<Acc> accs(workers, zero);
    auto run_block = [&](std::int64_t w) {
        const std::int64_t lo = trials * w / workers;
        const std::int64_t hi = trials * (w + 1) / workers;
        for (std::int64_t k = lo; k < hi; ++k) body(k, accs[w]);
    };
    if (workers == 1) {
        run_block(0);
    } else {
        std::vector<std::thread> pool;
        for (std::int64_t w = 0; w < workers; ++w) pool.emplace_back(run_block, w);
        for (auto& th : pool) th.join();
    }
    Acc total = zero;
    for (auto& a : accs) total += a;
    return total;
}

struct Counts {
    std::vector<std::int64_t> c;
    Counts& operator+=(const Counts& o) {
        for (std::size_t i = 0; i < c.size(); ++i) c[i] += o.c[i];
        return *this;
    }
};

struct Moments {
    std::int64_t n = 0;
    std::int64_t censored = 0;
    int128 sum = 0;
    int128 sum_sq = 0;
    Moments& operator+=(const Moments& o) {
        n += o.n;
        censored += o.censored;
        sum += o.sum;
        sum_sq += o.sum_sq;
        return *this;
    }
};

// sd / sqrt(n) with the (n - 1) sample variance.
SimEstimate summarize(const Moments& m, double scale) {
    SimEstimate out;
    out.trials = m.n + m.censored;
    out.censored = m.censored;
    if (m.n == 0) return out;
    const double n = static_cast<double>(m.n);
    const double mean = static_cast<double>(m.sum) / n;
    double var = 0.0;
    if (m.n > 1) {
        const double ss = static_cast<double>(m.sum_sq) - n * mean * mean;
        var = std::max(ss, 0.0) / (n - 1.0);
    }
    out.value = mean * scale;
    out.standard_error = std::sqrt(var / n) * scale;
    return out;
}

double indicator_se(std::int64_t hits, std::int64_t n) {
    if (n < 2) return 0.0;
    const double p = static_cast<double>(hits) / n;
    return std::sqrt(p * (1.0 - p) / (n - 1.0));
}

}  // namespace

Simulator::Simulator(const Graph& g, SimConfig cfg) : cfg_(std::move(cfg)) {
    const int n = g.size();
    if (cfg_.relocation.size() != n) throw ParameterError("relocation vector size does not match the graph");
    if (cfg_.start < 0 || cfg_.start >= n) throw ParameterError("start node out of range");
    if (cfg_.horizon < 1) throw ParameterError("horizon must be >= 1");
    if (cfg_.trials < 1) throw ParameterError("trials must be >= 1");
    offsets_.assign(n + 1, 0);
    for (int i = 0; i < n; ++i) {
        offsets_[i + 1] = offsets_[i] + g.degree(i);
        for (int j : g.neighbors(i)) neighbors_.push_back(j);
    }
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        if (cfg_.relocation[j] > 0.0) {
            acc += cfg_.relocation[j];
            reloc_cdf_.push_back(acc);
            reloc_nodes_.push_back(j);
        }
    }
    target_mask_.assign(n, 0);
    for (int b : cfg_.targets) {
        if (b < 0 || b >= n) throw ParameterError("target node out of range");
        target_mask_[b] = 1;
    }
    no_kill_.assign(n, 0);
}

template <class Visit>
std::int64_t Simulator::walk(std::int64_t k, std::int64_t horizon, const std::vector<char>& kill_mask,
                             Visit&& visit) const {
    SplitMix64 rng(derive_seed(cfg_.seed, static_cast<std::uint64_t>(k)));
    std::int64_t next_reset = sample_interval(cfg_.law, rng);
    int pos = cfg_.start;
    const bool single_reloc = reloc_nodes_.size() == 1;
    for (std::int64_t t = 1; t <= horizon; ++t) {
        EventKind kind;
        if (t == next_reset) {
            if (single_reloc) {
                pos = reloc_nodes_[0];
            } else {
                const double u = rng.uniform() * reloc_cdf_.back();
                auto it = std::upper_bound(reloc_cdf_.begin(), reloc_cdf_.end(), u);
                if (it == reloc_cdf_.end()) --it;
                pos = reloc_nodes_[it - reloc_cdf_.begin()];
            }
            const std::int64_t dt = sample_interval(cfg_.law, rng);
            next_reset = dt > kMaxSampledInterval - next_reset ? kMaxSampledInterval : next_reset + dt;
            kind = EventKind::Reset;
        } else {
            const int deg = offsets_[pos + 1] - offsets_[pos];
            pos = neighbors_[offsets_[pos] + static_cast<int>(rng.below(static_cast<std::uint64_t>(deg)))];
            kind = EventKind::Step;
        }
        if (kill_mask[pos]) {
            visit(t, pos, EventKind::Kill);
            return t;
        }
        visit(t, pos, kind);
    }
    return -1;
}

Trajectory Simulator::trajectory(std::int64_t k) const {
    Trajectory out;
    const std::int64_t killed = walk(k, cfg_.horizon, target_mask_, [&](std::int64_t t, int node, EventKind kind) {
        out.events.push_back(Event{t, node, kind});
        if (kind == EventKind::Reset) ++out.resets;
    });
    if (killed >= 0) out.kill_time = killed;
    return out;
}

OccupationEstimate Simulator::occupation(std::int64_t t) const {
    if (t < 0) throw ParameterError("time must be >= 0");
    const int n = static_cast<int>(target_mask_.size());
    Counts zero{std::vector<std::int64_t>(n, 0)};
    const Counts counts = run_trials(cfg_.trials, zero, [&](std::int64_t k, Counts& acc) {
        int last = cfg_.start;
        bool alive = true;
        walk(k, t, target_mask_, [&](std::int64_t, int node, EventKind kind) {
            last = node;
            if (kind == EventKind::Kill) alive = false;
        });
        if (alive) ++acc.c[last];
    });
    OccupationEstimate out;
    out.trials = cfg_.trials;
    out.probability.resize(n);
    out.standard_error.resize(n);
    for (int j = 0; j < n; ++j) {
        out.probability(j) = static_cast<double>(counts.c[j]) / cfg_.trials;
        out.standard_error(j) = indicator_se(counts.c[j], cfg_.trials);
    }
    return out;
}

SimEstimate Simulator::survival(std::int64_t t) const {
    if (t < 0) throw ParameterError("time must be >= 0");
    Counts zero{std::vector<std::int64_t>(1, 0)};
    const Counts alive = run_trials(cfg_.trials, zero, [&](std::int64_t k, Counts& acc) {
        if (walk(k, t, target_mask_, [](std::int64_t, int, EventKind) {}) < 0) ++acc.c[0];
    });
    SimEstimate out;
    out.trials = cfg_.trials;
    out.value = static_cast<double>(alive.c[0]) / cfg_.trials;
    out.standard_error = indicator_se(alive.c[0], cfg_.trials);
    return out;
}

SurvivalCurve Simulator::survival_curve() const {
    const std::int64_t h = cfg_.horizon;
    // kills[t] = number of paths killed exactly at t.
    Counts zero{std::vector<std::int64_t>(h + 1, 0)};
    const Counts kills = run_trials(cfg_.trials, zero, [&](std::int64_t k, Counts& acc) {
        const std::int64_t t = walk(k, h, target_mask_, [](std::int64_t, int, EventKind) {});
        if (t >= 0) ++acc.c[t];
    });
    SurvivalCurve out;
    out.trials = cfg_.trials;
    out.survival.resize(h + 1);
    out.standard_error.resize(h + 1);
    std::int64_t alive = cfg_.trials;
    for (std::int64_t t = 0; t <= h; ++t) {
        alive -= kills.c[t];
        out.survival(t) = static_cast<double>(alive) / cfg_.trials;
        out.standard_error(t) = indicator_se(alive, cfg_.trials);
    }
    return out;
}

SimEstimate Simulator::hitting_time(const std::vector<char>& mask) const {
    const Moments m = run_trials(cfg_.trials, Moments{}, [&](std::int64_t k, Moments& acc) {
        const std::int64_t t = walk(k, cfg_.horizon, mask, [](std::int64_t, int, EventKind) {});
        if (t < 0) {
            ++acc.censored;
        } else {
            ++acc.n;
            acc.sum += t;
            acc.sum_sq += static_cast<int128>(t) * t;
        }
    });
    if (m.n == 0) {
        throw RegimeError("every simulated path is censored at the horizon; increase --horizon");
    }
    return summarize(m, 1.0);
}

SimEstimate Simulator::mfht() const {
    if (cfg_.targets.empty()) throw ParameterError("mean first hitting time needs a target set");
    return hitting_time(target_mask_);
}

SimEstimate Simulator::mfpt(int target) const {
    const int n = static_cast<int>(target_mask_.size());
    if (target < 0 || target >= n) throw ParameterError("target node out of range");
    std::vector<char> mask(n, 0);
    mask[target] = 1;
    return hitting_time(mask);
}

SimEstimate Simulator::reset_rate() const {
    const Moments m = run_trials(cfg_.trials, Moments{}, [&](std::int64_t k, Moments& acc) {
        std::int64_t resets = 0;
        walk(k, cfg_.horizon, no_kill_, [&](std::int64_t, int, EventKind kind) {
            if (kind == EventKind::Reset) ++resets;
        });
        ++acc.n;
        acc.sum += resets;
        acc.sum_sq += static_cast<int128>(resets) * resets;
    });
    return summarize(m, 1.0 / static_cast<double>(cfg_.horizon));
}

void Simulator::dump(std::ostream& out, std::int64_t trials) const {
    out << "trial,t,node,event\n";
    for (std::int64_t k = 0; k < trials; ++k) {
        walk(k, cfg_.horizon, target_mask_, [&](std::int64_t t, int node, EventKind kind) {
            out << k << ',' << t << ',' << node << ',' << to_string(kind) << '\n';
        });
    }
}

Trajectory simulate_trajectory(const Graph& g, const SimConfig& cfg, std::int64_t k) {
    return Simulator(g, cfg).trajectory(k);
}

}  // namespace rwreset
