#include "oreo/manager.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace oreo {

void TimeBiasedReservoir::push(const Query& q, std::int64_t now) {
    if (capacity_ == 0) return;
    const double u = rng_.uniform_open01();
    const double key = std::log(-std::log(u)) - lambda_ * static_cast<double>(now);
    auto key_less = [](const Item& a, const Item& b) { return a.key < b.key; };
    if (items_.size() < capacity_) {
        items_.push_back({key, now, q});
        std::push_heap(items_.begin(), items_.end(), key_less);
        return;
    }
    if (key < items_.front().key) {
        std::pop_heap(items_.begin(), items_.end(), key_less);
        items_.back() = {key, now, q};
        std::push_heap(items_.begin(), items_.end(), key_less);
    }
}

std::vector<Query> TimeBiasedReservoir::queries() const {
    std::vector<Item> sorted = items_;
    std::sort(sorted.begin(), sorted.end(),
              [](const Item& a, const Item& b) { return a.arrival < b.arrival; });
    std::vector<Query> out;
    out.reserve(sorted.size());
    for (auto& it : sorted) out.push_back(it.query);
    return out;
}

double cost_vector_distance(const CostVector& a, const CostVector& b) {
    const std::size_t n = std::min(a.values.size(), b.values.size());
    if (n == 0) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += std::abs(a.values[i] - b.values[i]);
    return acc / static_cast<double>(n);
}

bool admit_state(const std::vector<const Layout*>& state_space, const Layout& candidate,
                 const std::vector<Query>& eval_queries, double epsilon) {
    if (eval_queries.empty()) throw std::invalid_argument("no evaluation sample");
    if (state_space.empty()) return true;  // bootstrap: min over an empty set is +inf
    const CostVector c = eval_skipped(candidate, eval_queries);
    double min_dist = std::numeric_limits<double>::infinity();
    for (const Layout* existing : state_space) {
        const CostVector ci = eval_skipped(*existing, eval_queries);
        min_dist = std::min(min_dist, cost_vector_distance(c, ci));
    }
    return min_dist > epsilon;
}

std::vector<std::int64_t> prune_states(
    const std::vector<std::pair<std::int64_t, const Layout*>>& state_space,
    const std::vector<Query>& eval_queries, double epsilon,
    std::optional<std::int64_t> keep_id) {
    if (eval_queries.empty()) throw std::invalid_argument("no evaluation sample");
    struct Entry {
        std::int64_t id;
        double mean;
        CostVector costs;
    };
    std::vector<Entry> entries;
    entries.reserve(state_space.size());
    for (const auto& [id, layout] : state_space) {
        CostVector cv = eval_skipped(*layout, eval_queries);
        entries.push_back({id, cv.mean(), std::move(cv)});
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.mean != b.mean) return a.mean < b.mean;
        return a.id < b.id;
    });

    // In ascending mean order a survivor eliminates only entries that sort
    // after it, so the higher-mean member of each close pair goes. The
    // occupied state survives unconditionally but eliminates nothing better
    // than itself.
    std::vector<std::size_t> kept;
    std::vector<std::int64_t> removed;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (keep_id && entries[i].id == *keep_id) {
            kept.push_back(i);
            continue;
        }
        bool close_to_better = false;
        for (std::size_t k : kept) {
            if (k >= i) continue;  // the protected state may sort later
            if (cost_vector_distance(entries[i].costs, entries[k].costs) <= epsilon) {
                close_to_better = true;
                break;
            }
        }
        if (close_to_better)
            removed.push_back(entries[i].id);
        else
            kept.push_back(i);
    }
    std::sort(removed.begin(), removed.end());
    return removed;
}

LayoutManager::LayoutManager(const Dataset* sample, ManagerConfig cfg,
                             const CandidateSchedule* schedule)
    : sample_(sample),
      cfg_(cfg),
      schedule_(schedule),
      window_(cfg.window_w),
      reservoir_(cfg.reservoir_r, cfg.lambda, child_seed(cfg.seed, 0x7e5e)) {}

std::vector<Query> LayoutManager::eval_sample() const {
    std::vector<Query> evals = reservoir_.queries();
    if (evals.empty()) evals = window_.queries();
    return evals;
}

std::vector<Layout> LayoutManager::make_candidates(std::int64_t seq) {
    std::vector<Layout> out;
    if (schedule_) {
        while (schedule_pos_ < schedule_->items.size() &&
               schedule_->items[schedule_pos_].first < seq)
            ++schedule_pos_;
        while (schedule_pos_ < schedule_->items.size() &&
               schedule_->items[schedule_pos_].first == seq)
            out.push_back(schedule_->items[schedule_pos_++].second);
        return out;
    }
    auto fit = [&](const std::vector<Query>& pool) {
        if (pool.empty()) return;
        if (cfg_.use_zorder)
            out.push_back(generate_zorder(*sample_, pool, cfg_.budget, cfg_.gen));
        else
            out.push_back(generate_qdtree(*sample_, pool, cfg_.budget, cfg_.min_leaf_rows, cfg_.gen));
    };
    if (cfg_.source == CandidateSource::Window || cfg_.source == CandidateSource::Both)
        fit(window_.queries());
    if (cfg_.source == CandidateSource::Reservoir || cfg_.source == CandidateSource::Both)
        fit(reservoir_.queries());
    return out;
}

std::vector<ManagerEvent> LayoutManager::step(
    const Query& q, const std::vector<std::pair<std::int64_t, const Layout*>>& state_space,
    std::int64_t current_id, std::int64_t& next_layout_id) {
    window_.push(q);
    reservoir_.push(q, q.seq);
    ++seen_;

    std::vector<ManagerEvent> events;
    if (cfg_.regen_period == 0 || seen_ % cfg_.regen_period != 0) return events;

    const std::vector<Query> evals = eval_sample();
    if (evals.empty()) return events;

    std::vector<const Layout*> existing;
    existing.reserve(state_space.size());
    for (const auto& [id, layout] : state_space) existing.push_back(layout);

    std::vector<std::shared_ptr<const Layout>> admitted;
    for (Layout& cand : make_candidates(q.seq)) {
        if (!admit_state(existing, cand, evals, cfg_.epsilon)) continue;
        cand.id = next_layout_id++;
        cand.created_at = q.seq;
        auto holder = std::make_shared<Layout>(std::move(cand));
        existing.push_back(holder.get());
        admitted.push_back(holder);
        events.push_back({ManagerEvent::Kind::Add, holder, holder->id});
    }

    if (cfg_.prune) {
        std::vector<std::pair<std::int64_t, const Layout*>> space = state_space;
        for (const auto& holder : admitted) space.emplace_back(holder->id, holder.get());
        for (std::int64_t id : prune_states(space, evals, cfg_.epsilon, current_id))
            events.push_back({ManagerEvent::Kind::Remove, nullptr, id});
    }
    return events;
}

}  // namespace oreo
