#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oreo/layout_gen.hpp"

namespace oreo {

enum class PolicyKind { Static, Greedy, Regret, OReO, MtsOptimal, OfflineOptimal, ParallelQ };

const char* to_string(PolicyKind k);
PolicyKind policy_from_string(const std::string& s);

// One layout fitted offline to the whole workload; never switches.
Layout static_policy(const Dataset& sample, const std::vector<Query>& workload,
                     PartitionBudget budget, bool use_zorder = false);

// Greedy baseline: switch whenever the fresh candidate has a strictly
// smaller mean cost than the current layout on the window, ignoring the
// reorganization cost.
bool greedy_policy_step(const Layout& current, const Layout& candidate,
                        const std::vector<Query>& window);

// Cumulative query-cost savings of each candidate relative to the layout
// currently in use. Entries reset when their candidate becomes current.
struct RegretLedger {
    std::map<std::int64_t, double> savings;

    void enter_candidate(std::int64_t id, double retroactive_savings) {
        savings[id] = retroactive_savings;
    }
    void drop(std::int64_t id) { savings.erase(id); }
};

// Adds this query's cost difference to every tracked candidate and returns
// the candidate to switch to once its cumulative saving exceeds alpha
// (ties to the lower id). `costs` must cover the current layout and every
// tracked candidate.
std::optional<std::int64_t> regret_policy_step(RegretLedger& ledger, std::int64_t current_id,
                                               const std::map<std::int64_t, double>& costs,
                                               double alpha);

// Offline optimum instance over per-event costs with per-event availability.
struct DpInstance {
    std::vector<std::int64_t> state_ids;          // column order
    std::vector<std::vector<double>> costs;       // [event][state index]
    std::vector<std::vector<std::uint8_t>> available;  // [event][state index]; empty = all
    double alpha = 0.0;
};

struct DpResult {
    double total = 0.0;
    std::vector<std::int64_t> path;  // state id per event
};

// Exact dynamic program: D[t][s] = c[t][s] + min(D[t-1][s], alpha + min D[t-1]).
// Ties prefer staying, then the lower state id. Initial placement is free.
DpResult offline_opt_dp(const DpInstance& instance);

}  // namespace oreo
