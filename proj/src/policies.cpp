#include "oreo/policies.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace oreo {

const char* to_string(PolicyKind k) {
    switch (k) {
        case PolicyKind::Static: return "static";
        case PolicyKind::Greedy: return "greedy";
        case PolicyKind::Regret: return "regret";
        case PolicyKind::OReO: return "oreo";
        case PolicyKind::MtsOptimal: return "mts-optimal";
        case PolicyKind::OfflineOptimal: return "offline-optimal";
        case PolicyKind::ParallelQ: return "parallel-q";
    }
    return "?";
}

PolicyKind policy_from_string(const std::string& s) {
    if (s == "static") return PolicyKind::Static;
    if (s == "greedy") return PolicyKind::Greedy;
    if (s == "regret") return PolicyKind::Regret;
    if (s == "oreo") return PolicyKind::OReO;
    if (s == "mts-optimal") return PolicyKind::MtsOptimal;
    if (s == "offline-optimal") return PolicyKind::OfflineOptimal;
    if (s == "parallel-q") return PolicyKind::ParallelQ;
    throw std::invalid_argument("unknown policy: " + s);
}

Layout static_policy(const Dataset& sample, const std::vector<Query>& workload,
                     PartitionBudget budget, bool use_zorder) {
    if (use_zorder) return generate_zorder(sample, workload, budget);
    return generate_qdtree(sample, workload, budget);
}

bool greedy_policy_step(const Layout& current, const Layout& candidate,
                        const std::vector<Query>& window) {
    return eval_skipped(candidate, window).mean() < eval_skipped(current, window).mean();
}

std::optional<std::int64_t> regret_policy_step(RegretLedger& ledger, std::int64_t current_id,
                                               const std::map<std::int64_t, double>& costs,
                                               double alpha) {
    auto cur = costs.find(current_id);
    if (cur == costs.end()) throw std::invalid_argument("cost missing for current layout");
    std::optional<std::int64_t> best;
    double best_savings = alpha;  // must strictly exceed alpha
    for (auto& [id, saved] : ledger.savings) {
        if (id == current_id) continue;
        auto it = costs.find(id);
        if (it == costs.end()) throw std::invalid_argument("cost missing for candidate");
        saved += cur->second - it->second;
        if (saved > best_savings) {
            best_savings = saved;
            best = id;
        }
    }
    if (best) ledger.savings[*best] = 0.0;
    return best;
}

DpResult offline_opt_dp(const DpInstance& instance) {
    const std::size_t n = instance.state_ids.size();
    const std::size_t T = instance.costs.size();
    if (n == 0) throw std::invalid_argument("no states");
    DpResult res;
    if (T == 0) return res;

    constexpr double kInf = std::numeric_limits<double>::infinity();
    auto avail = [&](std::size_t t, std::size_t s) -> bool {
        if (instance.available.empty()) return true;
        return instance.available[t][s] != 0;
    };
    for (std::size_t t = 0; t < T; ++t) {
        if (instance.costs[t].size() != n) throw std::invalid_argument("cost row size mismatch");
        bool any = false;
        for (std::size_t s = 0; s < n; ++s) any = any || avail(t, s);
        if (!any) throw std::invalid_argument("no state available at an event");
    }

    std::vector<double> prev(n, kInf), next(n, kInf);
    // choice[t][s]: previous state index when arriving at s for event t
    // (s itself encodes "stayed").
    std::vector<std::vector<std::int32_t>> choice(T, std::vector<std::int32_t>(n, -1));

    for (std::size_t t = 0; t < T; ++t) {
        // Cheapest predecessor for a switch, lowest index on ties.
        std::size_t best_prev = SIZE_MAX;
        if (t > 0) {
            for (std::size_t s = 0; s < n; ++s)
                if (prev[s] < (best_prev == SIZE_MAX ? kInf : prev[best_prev])) best_prev = s;
        }
        for (std::size_t s = 0; s < n; ++s) {
            next[s] = kInf;
            if (!avail(t, s)) continue;
            if (t == 0) {
                next[s] = instance.costs[t][s];
                choice[t][s] = static_cast<std::int32_t>(s);
                continue;
            }
            double stay = prev[s];
            double move = (best_prev == SIZE_MAX) ? kInf : prev[best_prev] + instance.alpha;
            if (stay <= move) {  // ties prefer staying
                next[s] = instance.costs[t][s] + stay;
                choice[t][s] = static_cast<std::int32_t>(s);
            } else {
                next[s] = instance.costs[t][s] + move;
                choice[t][s] = static_cast<std::int32_t>(best_prev);
            }
            if (next[s] == kInf) choice[t][s] = -1;
        }
        std::swap(prev, next);
    }

    std::size_t end = SIZE_MAX;
    for (std::size_t s = 0; s < n; ++s)
        if (end == SIZE_MAX || prev[s] < prev[end]) end = s;  // lowest id on ties
    res.total = prev[end];

    res.path.resize(T);
    std::size_t at = end;
    for (std::size_t t = T; t-- > 0;) {
        res.path[t] = instance.state_ids[at];
        at = static_cast<std::size_t>(choice[t][at]);
    }
    return res;
}

}  // namespace oreo
