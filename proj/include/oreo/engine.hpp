#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "oreo/rng.hpp"

namespace oreo {

struct EngineConfig {
    double alpha = 80.0;
    // Exponent of the predictor-biased transition distribution; 0 is exactly
    // uniform.
    double gamma = 0.0;
    // Keep the current state across a phase reset instead of jumping (saves
    // the initial movement charge of each phase).
    bool stay_on_reset = true;
    std::uint64_t seed = 0;
};

// What the reorganizer decided on an event. An engaged `switch_to` is a
// movement (charged alpha by the caller's ledger) even when the sampled
// target happens to equal the previous state.
struct Decision {
    bool phase_reset = false;
    std::optional<std::int64_t> switch_to;

    bool stayed() const { return !switch_to.has_value(); }
};

// Randomized reorganizer over a dynamic state space: per-state counters fill
// at alpha, full states leave the active set, and the occupied state jumps
// via the transition distribution when its counter fills. States added
// mid-phase defer to the next phase; removed states are marked full.
class Engine {
  public:
    explicit Engine(EngineConfig cfg, const std::vector<std::int64_t>& initial_states = {});

    // Defers the state to the next phase. Seeding an empty engine instead
    // activates and occupies the state immediately.
    void add_state(std::int64_t id);

    // Drops the state; may trigger a phase reset and/or a switch.
    Decision remove_state(std::int64_t id);

    // Charges every active counter with its cost (each in [0, 1]) and moves
    // if the occupied state filled.
    Decision on_query(const std::map<std::int64_t, double>& costs);

    // Starts a new phase: all states (including deferred) become active with
    // zero counters.
    Decision reset_states();

    std::int64_t current() const;
    bool has_states() const { return !states_.empty(); }
    std::size_t state_count() const { return states_.size(); }
    std::vector<std::int64_t> active() const;
    std::size_t active_count() const;
    bool contains(std::int64_t id) const { return states_.count(id) > 0; }
    bool is_active(std::int64_t id) const;
    bool is_deferred(std::int64_t id) const;
    double counter(std::int64_t id) const;
    std::int64_t phase() const { return phase_; }
    double alpha() const { return cfg_.alpha; }

    // Probability of jumping to each active state. Weights are the mean
    // fraction of data skipped in the previous phase; states without history
    // take the median weight of those with history (1 if none have any).
    std::vector<std::pair<std::int64_t, double>> transition_distribution() const;

    // Order-independent digest of (phase, current, counters) for traces.
    std::uint64_t counters_digest() const;

  private:
    struct StateInfo {
        double counter = 0.0;
        bool active = false;
        bool deferred = false;
        double phase_cost = 0.0;
        std::int64_t phase_queries = 0;
        std::optional<double> last_phase_mean_cost;
    };

    std::vector<double> active_weights(const std::vector<std::int64_t>& ids) const;
    std::int64_t sample_transition();
    Decision reset_internal();

    EngineConfig cfg_;
    std::map<std::int64_t, StateInfo> states_;
    std::int64_t current_ = -1;
    bool has_current_ = false;
    std::int64_t phase_ = 0;
    Rng rng_;
};

// Two-state task system with asymmetric movement (s0 -> s1 costs 1,
// s1 -> s0 is free): classic counter algorithm at threshold 1, tracked as an
// exact distribution over the two states. Starts in s0. Returns the exact
// expected total cost (service + movement).
double asym_two_state_policy(const std::vector<std::pair<double, double>>& cost_sequence);

// Offline optimum for the same asymmetric instance (starts in s0).
double asym_two_state_opt(const std::vector<std::pair<double, double>>& cost_sequence);

// Probability that the (i+1)-st worst of k states lands in a uniform
// q-subset: C(k-i-1, q-1) / C(k, q).
double parallel_q_selection_prob(std::size_t i, std::size_t k, std::size_t q);

// Expected-cost recurrence for the q-parallel variant, evaluated as an
// equality with f(i) = 0 below q:
//   f(m) = q*alpha + alpha + sum_i f(i) * p(i, m, q).
// At q = 1 this telescopes to 2*alpha*H(k).
double parallel_q_expected_cost(std::size_t k, std::size_t q, double alpha);

// Holds q states at once, serves on the minimum-counter held state and
// replaces the whole set (paying q movements) once every held counter fills.
class ParallelQEngine {
  public:
    struct Config {
        std::size_t q = 1;
        double alpha = 80.0;
        std::uint64_t seed = 0;
    };

    ParallelQEngine(Config cfg, const std::vector<std::int64_t>& states);

    struct StepResult {
        std::int64_t serving = -1;
        bool phase_reset = false;
        std::vector<std::int64_t> switched_to;  // non-empty => q movement charges
    };

    StepResult on_query(const std::map<std::int64_t, double>& costs);

    const std::vector<std::int64_t>& held() const { return held_; }
    double counter(std::int64_t id) const;
    std::int64_t phase() const { return phase_; }

  private:
    std::vector<std::int64_t> not_full() const;
    std::vector<std::int64_t> pick_fresh(const std::vector<std::int64_t>& pool);
    std::int64_t min_counter_held() const;

    Config cfg_;
    std::map<std::int64_t, double> counters_;
    std::vector<std::int64_t> held_;
    std::int64_t phase_ = 0;
    Rng rng_;
};

}  // namespace oreo
