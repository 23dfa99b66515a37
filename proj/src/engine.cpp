#include "oreo/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace oreo {

namespace {

// Floor for predictor weights so every active state stays reachable at
// finite gamma.
constexpr double kWeightFloor = 1e-6;

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t len) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

Engine::Engine(EngineConfig cfg, const std::vector<std::int64_t>& initial_states)
    : cfg_(cfg), rng_(cfg.seed) {
    if (cfg_.alpha <= 1.0) throw std::invalid_argument("alpha must be > 1");
    if (cfg_.gamma < 0.0) throw std::invalid_argument("gamma must be >= 0");
    for (std::int64_t id : initial_states) {
        if (!states_.emplace(id, StateInfo{}).second)
            throw std::invalid_argument("duplicate state id");
        states_[id].active = true;
    }
    if (!states_.empty()) {
        current_ = sample_transition();
        has_current_ = true;
    }
}

void Engine::add_state(std::int64_t id) {
    if (states_.count(id)) throw std::invalid_argument("duplicate state id");
    StateInfo info;
    if (states_.empty()) {
        // Bootstrap: the first state is occupied immediately.
        info.active = true;
        states_.emplace(id, info);
        current_ = id;
        has_current_ = true;
        return;
    }
    info.deferred = true;
    states_.emplace(id, info);
}

Decision Engine::remove_state(std::int64_t id) {
    auto it = states_.find(id);
    if (it == states_.end()) throw std::invalid_argument("unknown state id");
    const bool was_current = has_current_ && current_ == id;
    states_.erase(it);
    if (was_current) has_current_ = false;

    Decision d;
    if (active_count() == 0) {
        if (states_.empty()) throw std::runtime_error("no states");
        d = reset_internal();
        d.phase_reset = true;
        return d;
    }
    if (was_current) {
        current_ = sample_transition();
        has_current_ = true;
        d.switch_to = current_;
    }
    return d;
}

Decision Engine::on_query(const std::map<std::int64_t, double>& costs) {
    if (!has_current_) throw std::runtime_error("no states");
    for (auto& [id, info] : states_) {
        if (!info.active) continue;
        auto it = costs.find(id);
        if (it == costs.end()) throw std::invalid_argument("cost missing for active state");
        const double c = it->second;
        if (!(c >= 0.0 && c <= 1.0)) throw std::invalid_argument("cost out of range");
        info.counter += c;
        info.phase_cost += c;
        info.phase_queries += 1;
    }
    for (auto& [id, info] : states_)
        if (info.active && info.counter >= cfg_.alpha) info.active = false;

    Decision d;
    const StateInfo& cur = states_.at(current_);
    if (cur.active) return d;  // stay

    if (active_count() == 0) {
        d = reset_internal();
        d.phase_reset = true;
        return d;
    }
    current_ = sample_transition();
    d.switch_to = current_;
    return d;
}

Decision Engine::reset_states() {
    if (states_.empty()) throw std::runtime_error("no states");
    Decision d = reset_internal();
    d.phase_reset = true;
    return d;
}

Decision Engine::reset_internal() {
    // Fold this phase's charges into the predictor history.
    for (auto& [id, info] : states_) {
        if (info.phase_queries > 0)
            info.last_phase_mean_cost = info.phase_cost / static_cast<double>(info.phase_queries);
        info.phase_cost = 0.0;
        info.phase_queries = 0;
        info.counter = 0.0;
        info.active = true;
        info.deferred = false;
    }
    phase_ += 1;

    Decision d;
    if (has_current_ && cfg_.stay_on_reset && states_.count(current_)) return d;
    // Forced move: textbook reset jump, or the occupied state was removed.
    current_ = sample_transition();
    d.switch_to = current_;
    has_current_ = true;
    return d;
}

std::int64_t Engine::current() const {
    if (!has_current_) throw std::runtime_error("no states");
    return current_;
}

std::vector<std::int64_t> Engine::active() const {
    std::vector<std::int64_t> ids;
    for (const auto& [id, info] : states_)
        if (info.active) ids.push_back(id);
    return ids;
}

std::size_t Engine::active_count() const {
    std::size_t n = 0;
    for (const auto& [id, info] : states_) n += info.active ? 1 : 0;
    return n;
}

bool Engine::is_active(std::int64_t id) const {
    auto it = states_.find(id);
    return it != states_.end() && it->second.active;
}

bool Engine::is_deferred(std::int64_t id) const {
    auto it = states_.find(id);
    return it != states_.end() && it->second.deferred;
}

double Engine::counter(std::int64_t id) const {
    auto it = states_.find(id);
    if (it == states_.end()) throw std::invalid_argument("unknown state id");
    return it->second.counter;
}

std::vector<double> Engine::active_weights(const std::vector<std::int64_t>& ids) const {
    std::vector<double> weights(ids.size(), -1.0);
    std::vector<double> known;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const StateInfo& info = states_.at(ids[i]);
        if (info.last_phase_mean_cost) {
            weights[i] = std::clamp(1.0 - *info.last_phase_mean_cost, kWeightFloor, 1.0);
            known.push_back(weights[i]);
        }
    }
    double fallback = 1.0;
    if (!known.empty()) {
        std::sort(known.begin(), known.end());
        const std::size_t m = known.size();
        fallback = (m % 2 == 1) ? known[m / 2] : 0.5 * (known[m / 2 - 1] + known[m / 2]);
    }
    for (double& w : weights)
        if (w < 0.0) w = fallback;
    return weights;
}

std::vector<std::pair<std::int64_t, double>> Engine::transition_distribution() const {
    const std::vector<std::int64_t> ids = active();
    if (ids.empty()) throw std::runtime_error("no active states");
    std::vector<std::pair<std::int64_t, double>> dist;
    dist.reserve(ids.size());
    if (cfg_.gamma == 0.0) {
        const double p = 1.0 / static_cast<double>(ids.size());
        for (std::int64_t id : ids) dist.emplace_back(id, p);
        return dist;
    }
    std::vector<double> w = active_weights(ids);
    double total = 0.0;
    for (double& x : w) {
        x = std::pow(x, cfg_.gamma);
        total += x;
    }
    for (std::size_t i = 0; i < ids.size(); ++i) dist.emplace_back(ids[i], w[i] / total);
    return dist;
}

std::int64_t Engine::sample_transition() {
    const std::vector<std::int64_t> ids = active();
    if (ids.empty()) throw std::runtime_error("no active states");
    if (cfg_.gamma == 0.0) return ids[rng_.bounded(ids.size())];
    std::vector<double> w = active_weights(ids);
    for (double& x : w) x = std::pow(x, cfg_.gamma);
    return ids[rng_.weighted_index(w)];
}

std::uint64_t Engine::counters_digest() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    h = fnv1a(h, &phase_, sizeof(phase_));
    if (has_current_) h = fnv1a(h, &current_, sizeof(current_));
    for (const auto& [id, info] : states_) {
        h = fnv1a(h, &id, sizeof(id));
        h = fnv1a(h, &info.counter, sizeof(info.counter));
        const unsigned char flags =
            static_cast<unsigned char>((info.active ? 1 : 0) | (info.deferred ? 2 : 0));
        h = fnv1a(h, &flags, sizeof(flags));
    }
    return h;
}

double asym_two_state_policy(const std::vector<std::pair<double, double>>& cost_sequence) {
    constexpr double kThreshold = 1.0;  // the s0 -> s1 move cost
    double c0 = 0.0, c1 = 0.0;
    double p0 = 1.0, p1 = 0.0;
    double total = 0.0;
    for (const auto& [q0, q1] : cost_sequence) {
        if (!(q0 >= 0.0 && q0 <= 1.0 && q1 >= 0.0 && q1 <= 1.0))
            throw std::invalid_argument("cost out of range");
        if (c0 < kThreshold) c0 += q0;
        if (c1 < kThreshold) c1 += q1;
        const bool full0 = c0 >= kThreshold;
        const bool full1 = c1 >= kThreshold;
        if (full0 && full1) {
            // Phase reset: jump uniformly; only mass leaving s0 for s1 pays.
            total += p0 * 0.5;
            p0 = p1 = 0.5;
            c0 = c1 = 0.0;
        } else if (full0) {
            total += p0;  // all mass at s0 moves up, paying 1 each
            p1 += p0;
            p0 = 0.0;
        } else if (full1) {
            p0 += p1;  // moving down is free
            p1 = 0.0;
        }
        total += p0 * q0 + p1 * q1;
    }
    return total;
}

double asym_two_state_opt(const std::vector<std::pair<double, double>>& cost_sequence) {
    double at0 = 0.0, at1 = 1.0;  // may move up before the first query
    for (const auto& [q0, q1] : cost_sequence) {
        const double n0 = q0 + std::min(at0, at1);        // s1 -> s0 is free
        const double n1 = q1 + std::min(at1, at0 + 1.0);  // s0 -> s1 pays 1
        at0 = n0;
        at1 = n1;
    }
    return std::min(at0, at1);
}

double parallel_q_selection_prob(std::size_t i, std::size_t k, std::size_t q) {
    if (q < 1 || q > k) throw std::invalid_argument("require 1 <= q <= k");
    if (i > k - q) return 0.0;
    const double ln_num = std::lgamma(static_cast<double>(k - i)) -
                          std::lgamma(static_cast<double>(q)) -
                          std::lgamma(static_cast<double>(k - i - q + 1));
    const double ln_den = std::lgamma(static_cast<double>(k + 1)) -
                          std::lgamma(static_cast<double>(q + 1)) -
                          std::lgamma(static_cast<double>(k - q + 1));
    return std::exp(ln_num - ln_den);
}

double parallel_q_expected_cost(std::size_t k, std::size_t q, double alpha) {
    if (q < 1 || q > k) throw std::invalid_argument("require 1 <= q <= k");
    std::vector<double> f(k + 1, 0.0);
    for (std::size_t m = q; m <= k; ++m) {
        double acc = static_cast<double>(q) * alpha + alpha;
        for (std::size_t i = q; i + q <= m; ++i)
            acc += f[i] * parallel_q_selection_prob(i, m, q);
        f[m] = acc;
    }
    return f[k];
}

ParallelQEngine::ParallelQEngine(Config cfg, const std::vector<std::int64_t>& states)
    : cfg_(cfg), rng_(cfg.seed) {
    if (cfg_.q < 1 || cfg_.q > states.size())
        throw std::invalid_argument("require 1 <= q <= |states|");
    for (std::int64_t id : states)
        if (!counters_.emplace(id, 0.0).second) throw std::invalid_argument("duplicate state id");
    held_ = pick_fresh(not_full());
}

std::vector<std::int64_t> ParallelQEngine::not_full() const {
    std::vector<std::int64_t> ids;
    for (const auto& [id, c] : counters_)
        if (c < cfg_.alpha) ids.push_back(id);
    return ids;
}

std::vector<std::int64_t> ParallelQEngine::pick_fresh(const std::vector<std::int64_t>& pool) {
    // Uniform without replacement; exactly one draw per picked state.
    std::vector<std::int64_t> candidates = pool;
    std::vector<std::int64_t> picked;
    picked.reserve(cfg_.q);
    for (std::size_t j = 0; j < cfg_.q; ++j) {
        const std::size_t idx = rng_.bounded(candidates.size());
        picked.push_back(candidates[idx]);
        candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(idx));
    }
    std::sort(picked.begin(), picked.end());
    return picked;
}

std::int64_t ParallelQEngine::min_counter_held() const {
    std::int64_t best = held_.front();
    for (std::int64_t id : held_)
        if (counters_.at(id) < counters_.at(best)) best = id;  // ties keep the lower id
    return best;
}

ParallelQEngine::StepResult ParallelQEngine::on_query(const std::map<std::int64_t, double>& costs) {
    for (auto& [id, c] : counters_) {
        if (c >= cfg_.alpha) continue;
        auto it = costs.find(id);
        if (it == costs.end()) throw std::invalid_argument("cost missing for active state");
        if (!(it->second >= 0.0 && it->second <= 1.0))
            throw std::invalid_argument("cost out of range");
        c += it->second;
    }

    StepResult res;
    bool all_full = true;
    for (std::int64_t id : held_)
        if (counters_.at(id) < cfg_.alpha) all_full = false;
    if (all_full) {
        std::vector<std::int64_t> pool = not_full();
        if (pool.size() < cfg_.q) {
            // Not enough states left: new phase over the full set.
            for (auto& [id, c] : counters_) c = 0.0;
            phase_ += 1;
            res.phase_reset = true;
            pool = not_full();
        }
        held_ = pick_fresh(pool);
        res.switched_to = held_;
    }
    res.serving = min_counter_held();
    return res;
}

double ParallelQEngine::counter(std::int64_t id) const {
    auto it = counters_.find(id);
    if (it == counters_.end()) throw std::invalid_argument("unknown state id");
    return it->second;
}

}  // namespace oreo
