#pragma once

#include "rwreset/common.hpp"
#include "rwreset/graph.hpp"
#include "rwreset/propagator.hpp"
#include "rwreset/renewal.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace rwreset {

struct SimConfig {
    int start = 0;
    std::int64_t horizon = 1;
    std::int64_t trials = 1;
    std::uint64_t seed = 0;
    ResetLaw law;
    RelocationVector relocation;
    /// Killing set; empty for a free walk.
    std::vector<int> targets;
};

enum class EventKind { Step, Reset, Kill };

const char* to_string(EventKind e);

struct Event {
    std::int64_t t = 0;
    int node = 0;
    EventKind kind = EventKind::Step;
};

/// Events for t = 1, 2, ...; the path starts at cfg.start at t = 0.
struct Trajectory {
    std::vector<Event> events;
    std::int64_t resets = 0;  // a relocation onto a target is reported as the kill
    std::optional<std::int64_t> kill_time;
};

struct SimEstimate {
    double value = 0.0;
    double standard_error = 0.0;
    std::int64_t trials = 0;
    /// Paths without a hit at the horizon (hitting-time statistics only).
    std::int64_t censored = 0;
};

struct OccupationEstimate {
    Vector probability;
    Vector standard_error;
    std::int64_t trials = 0;
};

struct SurvivalCurve {
    Vector survival;  // t = 0..horizon
    Vector standard_error;
    std::int64_t trials = 0;
};

/// Trajectory-level simulator. Trajectory k draws from its own stream
/// derive_seed(seed, k), so every statistic is reproducible and independent of
/// the number of worker threads. A reset arrival replaces the step of its tick;
/// killing is checked after every move, never at t = 0.
class Simulator {
public:
    Simulator(const Graph& g, SimConfig cfg);

    const SimConfig& config() const noexcept { return cfg_; }

    Trajectory trajectory(std::int64_t k) const;

    /// Histogram of positions at time t (killed paths count for no node).
    OccupationEstimate occupation(std::int64_t t) const;
    SimEstimate survival(std::int64_t t) const;
    SurvivalCurve survival_curve() const;
    /// Mean first hitting time of cfg.targets over uncensored paths. Throws
    /// RegimeError when every path is censored.
    SimEstimate mfht() const;
    /// Mean first passage time to a single node (first visit at t >= 1).
    SimEstimate mfpt(int target) const;
    /// Resets per step up to the horizon.
    SimEstimate reset_rate() const;

    /// CSV rows trial,t,node,event for the first `trials` trajectories.
    void dump(std::ostream& out, std::int64_t trials) const;

private:
    template <class Visit>
    std::int64_t walk(std::int64_t k, std::int64_t horizon, const std::vector<char>& kill_mask,
                      Visit&& visit) const;
    SimEstimate hitting_time(const std::vector<char>& mask) const;

    SimConfig cfg_;
    std::vector<int> offsets_;
    std::vector<int> neighbors_;
    std::vector<double> reloc_cdf_;
    std::vector<int> reloc_nodes_;
    std::vector<char> target_mask_;
    std::vector<char> no_kill_;
};

Trajectory simulate_trajectory(const Graph& g, const SimConfig& cfg, std::int64_t k);

}  // namespace rwreset
