#pragma once

#include <deque>
#include <functional>
#include <memory>
#include <optional>

#include "oreo/layout_gen.hpp"
#include "oreo/rng.hpp"

namespace oreo {

class SlidingWindow {
  public:
    explicit SlidingWindow(std::size_t capacity) : capacity_(capacity) {}

    void push(const Query& q) {
        buffer_.push_back(q);
        if (buffer_.size() > capacity_) buffer_.pop_front();
    }
    std::size_t size() const { return buffer_.size(); }
    std::size_t capacity() const { return capacity_; }
    std::vector<Query> queries() const { return {buffer_.begin(), buffer_.end()}; }

  private:
    std::size_t capacity_;
    std::deque<Query> buffer_;
};

// Weight-decay reservoir: item priorities follow weighted reservoir sampling
// with weight exp(lambda * arrival). lambda = 0 reduces to classic uniform
// reservoir sampling; large lambda keeps approximately the newest R items.
class TimeBiasedReservoir {
  public:
    TimeBiasedReservoir(std::size_t capacity, double lambda, std::uint64_t seed)
        : capacity_(capacity), lambda_(lambda), rng_(seed) {}

    void push(const Query& q, std::int64_t now);
    std::size_t size() const { return items_.size(); }
    // Contents in arrival order.
    std::vector<Query> queries() const;

  private:
    struct Item {
        double key;  // log(-log u) - lambda * now, smaller survives
        std::int64_t arrival;
        Query query;
    };
    std::size_t capacity_;
    double lambda_;
    Rng rng_;
    std::vector<Item> items_;  // max-heap on key
};

// Admission rule: a candidate joins the state space only if the normalized
// L1 distance between its cost vector and every existing layout's cost
// vector (over the evaluation sample) exceeds epsilon. An empty state space
// admits. Throws "no evaluation sample" on an empty query sample.
bool admit_state(const std::vector<const Layout*>& state_space, const Layout& candidate,
                 const std::vector<Query>& eval_queries, double epsilon);

// Mean |a - b| over the common length.
double cost_vector_distance(const CostVector& a, const CostVector& b);

// Layouts to drop: among pairs closer than epsilon the higher-mean-cost one
// goes (ties drop the higher id). `keep_id` (the occupied state) is never
// removed and the result never empties the space.
std::vector<std::int64_t> prune_states(
    const std::vector<std::pair<std::int64_t, const Layout*>>& state_space,
    const std::vector<Query>& eval_queries, double epsilon,
    std::optional<std::int64_t> keep_id);

enum class CandidateSource { Window, Reservoir, Both };

struct ManagerConfig {
    std::size_t window_w = 200;
    std::size_t reservoir_r = 64;  // evaluation-sample size
    double lambda = 0.01;
    double epsilon = 0.08;
    std::size_t regen_period = 100;
    CandidateSource source = CandidateSource::Window;
    bool use_zorder = false;  // candidate kind; Qd-tree by default
    bool prune = true;
    PartitionBudget budget{32};
    std::size_t min_leaf_rows = 0;
    LayoutGenOptions gen;
    std::uint64_t seed = 0;
};

struct ManagerEvent {
    enum class Kind { Add, Remove };
    Kind kind;
    std::shared_ptr<const Layout> layout;  // Add only
    std::int64_t id = -1;
};

// Candidate layouts keyed by the decision sequence number. Because candidate
// generation is a pure function of the query stream, one schedule can be
// shared by every online policy in a comparison.
struct CandidateSchedule {
    std::vector<std::pair<std::int64_t, Layout>> items;
};

// Produces candidate layouts from recent query samples and issues state
// add/remove events.
class LayoutManager {
  public:
    // Fits candidates against `sample`; both pointers must outlive the
    // manager. A non-null `schedule` replaces in-place fitting (admission
    // and pruning still run).
    LayoutManager(const Dataset* sample, ManagerConfig cfg,
                  const CandidateSchedule* schedule = nullptr);

    // `state_space` is the engine's current state set (id -> layout),
    // `current_id` the occupied state. `next_layout_id` stamps admissions.
    std::vector<ManagerEvent> step(const Query& q,
                                   const std::vector<std::pair<std::int64_t, const Layout*>>& state_space,
                                   std::int64_t current_id, std::int64_t& next_layout_id);

    const SlidingWindow& window() const { return window_; }
    std::vector<Query> eval_sample() const;

  private:
    std::vector<Layout> make_candidates(std::int64_t seq);

    const Dataset* sample_;
    ManagerConfig cfg_;
    const CandidateSchedule* schedule_;
    std::size_t schedule_pos_ = 0;
    SlidingWindow window_;
    TimeBiasedReservoir reservoir_;
    std::size_t seen_ = 0;
};

}  // namespace oreo
