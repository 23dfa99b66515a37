#include "oreo/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace oreo {

using nlohmann::json;

void RunConfig::validate() const {
    if (alpha <= 1.0) throw std::invalid_argument("alpha must be > 1");
    if (gamma < 0.0) throw std::invalid_argument("gamma must be >= 0");
    if (epsilon < 0.0 || epsilon > 1.0) throw std::invalid_argument("epsilon must be in [0, 1]");
    if (budget_k < 1) throw std::invalid_argument("budget must be >= 1");
    if (window_w < 1) throw std::invalid_argument("window must be >= 1");
    if (regen_period < 1) throw std::invalid_argument("regen period must be >= 1");
    if (parallel_q < 1) throw std::invalid_argument("q must be >= 1");
}

RunConfig run_config_from_kv(const std::map<std::string, std::string>& kv) {
    RunConfig cfg;
    auto get = [&](const char* key) -> const std::string* {
        auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };
    try {
        if (auto* v = get("alpha")) cfg.alpha = std::stod(*v);
        if (auto* v = get("gamma")) cfg.gamma = std::stod(*v);
        if (auto* v = get("epsilon")) cfg.epsilon = std::stod(*v);
        if (auto* v = get("window_w")) cfg.window_w = std::stoul(*v);
        if (auto* v = get("regen_period")) cfg.regen_period = std::stoul(*v);
        if (auto* v = get("delay")) cfg.delay = std::stoul(*v);
        if (auto* v = get("budget_k")) cfg.budget_k = std::stoul(*v);
        if (auto* v = get("seed")) cfg.seed = std::stoull(*v);
        if (auto* v = get("policy")) cfg.policy = policy_from_string(*v);
        if (auto* v = get("reservoir_r")) cfg.reservoir_r = std::stoul(*v);
        if (auto* v = get("lambda")) cfg.lambda = std::stod(*v);
        if (auto* v = get("q")) cfg.parallel_q = std::stoul(*v);
        if (auto* v = get("stay_on_reset")) cfg.stay_on_reset = (*v == "1" || *v == "true");
        if (auto* v = get("prune")) cfg.prune = (*v == "1" || *v == "true");
        if (auto* v = get("use_zorder")) cfg.use_zorder = (*v == "1" || *v == "true");
        if (auto* v = get("sample_rows")) cfg.sample_rows = std::stoul(*v);
        if (auto* v = get("max_cuts")) cfg.max_cuts = std::stoul(*v);
        if (auto* v = get("candidate_source")) {
            if (*v == "window")
                cfg.candidate_source = CandidateSource::Window;
            else if (*v == "reservoir")
                cfg.candidate_source = CandidateSource::Reservoir;
            else if (*v == "both")
                cfg.candidate_source = CandidateSource::Both;
            else
                throw std::invalid_argument("unknown candidate_source: " + *v);
        }
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("bad config value: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

std::string Summary::csv_header() {
    return "policy,seed,alpha,gamma,epsilon,delay,queries,query_cost,reorg_cost,total_cost,"
           "switches,phases,adds,removes,states_final,states_peak";
}

std::string Summary::csv_row() const {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "%s,%llu,%.10g,%.10g,%.10g,%zu,%zu,%.10g,%.10g,%.10g,%zu,%zu,%zu,%zu,%zu,%zu",
                  policy.c_str(), static_cast<unsigned long long>(seed), alpha, gamma, epsilon,
                  delay, queries, query_cost, reorg_cost, total, switches, phases, adds, removes,
                  states_final, states_peak);
    return buf;
}

void TraceWriter::write_config(const RunConfig& cfg, std::size_t num_queries) {
    json j;
    j["event"] = "config";
    j["policy"] = to_string(cfg.policy);
    j["alpha"] = cfg.alpha;
    j["gamma"] = cfg.gamma;
    j["epsilon"] = cfg.epsilon;
    j["delay"] = cfg.delay;
    j["seed"] = cfg.seed;
    j["queries"] = num_queries;
    (*out_) << j.dump() << '\n';
}

void TraceWriter::write_event(const TraceEvent& e) {
    json j;
    j["seq"] = e.seq;
    j["event"] = to_string(e.kind);
    j["state_id"] = e.state_id;
    j["cost"] = e.cost;
    j["phase"] = e.phase;
    j["digest"] = e.counters_digest;
    if (e.kind == EventKind::Query && !e.state_costs.empty()) {
        json costs = json::object();
        for (const auto& [id, c] : e.state_costs) costs[std::to_string(id)] = c;
        j["costs"] = std::move(costs);
    }
    (*out_) << j.dump() << '\n';
}

Dataset fitting_sample(const Dataset& data, std::size_t rows, std::uint64_t seed) {
    const std::size_t n = data.num_rows();
    if (rows == 0 || rows >= n) return data;
    Rng rng(seed);
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t i = 0; i < rows; ++i)
        std::swap(idx[i], idx[i + rng.bounded(n - i)]);
    idx.resize(rows);
    std::sort(idx.begin(), idx.end());
    Dataset out;
    for (const auto& col : data.columns) {
        Column c;
        c.name = col.name;
        c.kind = col.kind;
        c.values.reserve(rows);
        for (std::size_t r : idx) c.values.push_back(col.values[r]);
        out.columns.push_back(std::move(c));
    }
    return out;
}

CandidateSchedule build_candidate_schedule(const Dataset& sample,
                                           const std::vector<Query>& workload,
                                           const RunConfig& cfg) {
    CandidateSchedule sched;
    SlidingWindow window(cfg.window_w);
    LayoutGenOptions gen;
    gen.max_cuts = cfg.max_cuts;
    std::size_t seen = 0;
    for (const auto& q : workload) {
        window.push(q);
        if (++seen % cfg.regen_period != 0) continue;
        const std::vector<Query> pool = window.queries();
        if (pool.empty()) continue;
        Layout cand = cfg.use_zorder
                          ? generate_zorder(sample, pool, PartitionBudget{cfg.budget_k}, gen)
                          : generate_qdtree(sample, pool, PartitionBudget{cfg.budget_k}, 0, gen);
        sched.items.emplace_back(q.seq, std::move(cand));
    }
    return sched;
}

namespace {

// Shared bookkeeping: registry of live layouts, the delayed serving slot and
// the ledger/summary wiring.
struct RunState {
    const RunConfig& cfg;
    TraceWriter* trace;
    CostLedger ledger;
    std::map<std::int64_t, std::shared_ptr<const Layout>> registry;
    std::int64_t next_id = 0;
    std::shared_ptr<const Layout> serving;
    std::shared_ptr<const Layout> pending_target;
    std::int64_t pending_at = -1;
    std::size_t states_peak = 0;

    explicit RunState(const RunConfig& c, TraceWriter* t) : cfg(c), trace(t) {
        ledger.alpha = c.alpha;
    }

    std::shared_ptr<const Layout> add_layout(Layout layout, std::int64_t created_at) {
        layout.id = next_id++;
        layout.created_at = created_at;
        auto holder = std::make_shared<const Layout>(std::move(layout));
        registry.emplace(holder->id, holder);
        states_peak = std::max(states_peak, registry.size());
        return holder;
    }

    std::vector<std::pair<std::int64_t, const Layout*>> space() const {
        std::vector<std::pair<std::int64_t, const Layout*>> v;
        v.reserve(registry.size());
        for (const auto& [id, l] : registry) v.emplace_back(id, l.get());
        return v;
    }

    void apply_pending(std::int64_t seq) {
        if (pending_target && seq >= pending_at) {
            serving = pending_target;
            pending_target = nullptr;
        }
    }

    void begin_switch(std::int64_t seq, std::int64_t target) {
        auto it = registry.find(target);
        if (it == registry.end()) throw std::logic_error("switch target not in registry");
        if (cfg.delay == 0) {
            serving = it->second;
            pending_target = nullptr;
        } else {
            pending_target = it->second;
            pending_at = seq + static_cast<std::int64_t>(cfg.delay);
        }
    }

    void emit(const TraceEvent& e) {
        if (trace) trace->write_event(e);
    }

    void record_query(std::int64_t seq, const Query& q, std::int64_t phase, std::uint64_t digest,
                      const std::map<std::int64_t, double>* costs_by_state = nullptr) {
        std::vector<std::pair<std::int64_t, double>> costs;
        costs.reserve(registry.size());
        if (costs_by_state) {
            for (const auto& [id, c] : *costs_by_state) costs.emplace_back(id, c);
        } else {
            for (const auto& [id, l] : registry) costs.emplace_back(id, query_cost(*l, q));
        }
        double c = -1.0;
        if (costs_by_state) {
            auto it = costs_by_state->find(serving->id);
            if (it != costs_by_state->end()) c = it->second;
        }
        if (c < 0.0) c = query_cost(*serving, q);  // serving may already be removed
        ledger.record_query(seq, serving->id, c, phase, digest, std::move(costs));
        emit(ledger.events.back());
    }

    void record_switch(std::int64_t seq, std::int64_t target, std::int64_t phase,
                       std::uint64_t digest) {
        ledger.record_switch(seq, target, phase, digest, cfg.alpha);
        emit(ledger.events.back());
        begin_switch(seq, target);
    }

    void record_plain(std::int64_t seq, EventKind kind, std::int64_t id, std::int64_t phase,
                      std::uint64_t digest) {
        ledger.record_event(seq, kind, id, phase, digest);
        emit(ledger.events.back());
    }

    Summary summarize(std::size_t queries, std::size_t states_final) const {
        Summary s;
        s.policy = to_string(cfg.policy);
        s.seed = cfg.seed;
        s.alpha = cfg.alpha;
        s.gamma = cfg.gamma;
        s.epsilon = cfg.epsilon;
        s.delay = cfg.delay;
        s.queries = queries;
        s.query_cost = ledger.query_cost;
        s.reorg_cost = ledger.reorg_cost;
        s.total = ledger.total();
        s.switches = ledger.count(EventKind::Switch);
        s.phases = ledger.count(EventKind::PhaseReset);
        s.adds = ledger.count(EventKind::Add);
        s.removes = ledger.count(EventKind::Remove);
        s.states_final = states_final;
        s.states_peak = std::max(states_peak, states_final);
        return s;
    }
};

std::map<std::int64_t, double> metadata_costs(const RunState& st, const Query& q) {
    std::map<std::int64_t, double> costs;
    for (const auto& [id, l] : st.registry) costs[id] = query_cost(*l, q);
    return costs;
}

// Per-template layouts for the oracle-style policies (offline privilege).
std::map<int, Layout> template_layouts(const Dataset& sample, const std::vector<Query>& workload,
                                       PartitionBudget budget) {
    std::map<int, std::vector<Query>> groups;
    for (const auto& q : workload) {
        if (!q.template_id) throw std::invalid_argument("workload query lacks a template label");
        groups[*q.template_id].push_back(q);
    }
    std::map<int, Layout> out;
    for (const auto& [t, queries] : groups)
        out.emplace(t, best_layout_for_template(sample, queries, budget));
    return out;
}

RunResult run_engine_policy(const RunConfig& cfg, const Dataset& data,
                            const std::vector<Query>& workload, TraceWriter* trace,
                            const CandidateSchedule* shared) {
    RunState st(cfg, trace);
    const Dataset sample = fitting_sample(data, cfg.sample_rows, child_seed(cfg.seed, 3));

    std::vector<std::int64_t> initial_ids;
    std::unique_ptr<LayoutManager> manager;
    ManagerConfig mcfg;
    if (cfg.policy == PolicyKind::OReO) {
        auto def = st.add_layout(generate_zorder(sample, {}, PartitionBudget{cfg.budget_k}), 0);
        initial_ids.push_back(def->id);
        mcfg.window_w = cfg.window_w;
        mcfg.reservoir_r = cfg.reservoir_r;
        mcfg.lambda = cfg.lambda;
        mcfg.epsilon = cfg.epsilon;
        mcfg.regen_period = cfg.regen_period;
        mcfg.source = cfg.candidate_source;
        mcfg.use_zorder = cfg.use_zorder;
        mcfg.prune = cfg.prune;
        mcfg.budget = PartitionBudget{cfg.budget_k};
        mcfg.gen.max_cuts = cfg.max_cuts;
        mcfg.seed = child_seed(cfg.seed, 2);
        manager = std::make_unique<LayoutManager>(&sample, mcfg, shared);
    } else {  // MtsOptimal: fixed per-template state space, no manager
        for (auto& [t, layout] : template_layouts(sample, workload, PartitionBudget{cfg.budget_k}))
            initial_ids.push_back(st.add_layout(std::move(layout), 0)->id);
    }

    Engine engine({cfg.alpha, cfg.gamma, cfg.stay_on_reset, child_seed(cfg.seed, 1)}, initial_ids);
    st.serving = st.registry.at(engine.current());
    for (std::int64_t id : initial_ids)
        st.record_plain(-1, EventKind::Add, id, 0, engine.counters_digest());

    for (const auto& q : workload) {
        st.apply_pending(q.seq);
        if (manager) {
            for (const auto& ev : manager->step(q, st.space(), engine.current(), st.next_id)) {
                if (ev.kind == ManagerEvent::Kind::Add) {
                    st.registry.emplace(ev.id, ev.layout);
                    st.states_peak = std::max(st.states_peak, st.registry.size());
                    engine.add_state(ev.id);
                    st.record_plain(q.seq, EventKind::Add, ev.id, engine.phase(),
                                    engine.counters_digest());
                } else {
                    const Decision d = engine.remove_state(ev.id);
                    st.record_plain(q.seq, EventKind::Remove, ev.id, engine.phase(),
                                    engine.counters_digest());
                    st.registry.erase(ev.id);
                    if (d.phase_reset)
                        st.record_plain(q.seq, EventKind::PhaseReset, engine.current(),
                                        engine.phase(), engine.counters_digest());
                    if (d.switch_to)
                        st.record_switch(q.seq, *d.switch_to, engine.phase(),
                                         engine.counters_digest());
                }
            }
        }
        const std::map<std::int64_t, double> costs = metadata_costs(st, q);
        const Decision d = engine.on_query(costs);
        if (d.phase_reset)
            st.record_plain(q.seq, EventKind::PhaseReset, engine.current(), engine.phase(),
                            engine.counters_digest());
        if (d.switch_to)
            st.record_switch(q.seq, *d.switch_to, engine.phase(), engine.counters_digest());
        st.record_query(q.seq, q, engine.phase(), engine.counters_digest(), &costs);
    }

    RunResult res;
    res.summary = st.summarize(workload.size(), st.registry.size());
    res.ledger = std::move(st.ledger);
    return res;
}

RunResult run_static(const RunConfig& cfg, const Dataset& data, const std::vector<Query>& workload,
                     TraceWriter* trace) {
    RunState st(cfg, trace);
    const Dataset sample = fitting_sample(data, cfg.sample_rows, child_seed(cfg.seed, 3));
    st.serving = st.add_layout(
        static_policy(sample, workload, PartitionBudget{cfg.budget_k}, cfg.use_zorder), 0);
    for (const auto& q : workload) st.record_query(q.seq, q, 0, 0);
    RunResult res;
    res.summary = st.summarize(workload.size(), st.registry.size());
    res.ledger = std::move(st.ledger);
    return res;
}

RunResult run_greedy(const RunConfig& cfg, const Dataset& data, const std::vector<Query>& workload,
                     TraceWriter* trace, const CandidateSchedule* shared) {
    RunState st(cfg, trace);
    const Dataset sample = fitting_sample(data, cfg.sample_rows, child_seed(cfg.seed, 3));
    CandidateSchedule local;
    if (!shared) {
        local = build_candidate_schedule(sample, workload, cfg);
        shared = &local;
    }
    auto current = st.add_layout(generate_zorder(sample, {}, PartitionBudget{cfg.budget_k}), 0);
    st.serving = current;
    SlidingWindow window(cfg.window_w);
    std::size_t pos = 0;
    for (const auto& q : workload) {
        st.apply_pending(q.seq);
        window.push(q);
        while (pos < shared->items.size() && shared->items[pos].first == q.seq) {
            const Layout& cand = shared->items[pos].second;
            if (greedy_policy_step(*current, cand, window.queries())) {
                current = st.add_layout(cand, q.seq);
                st.record_switch(q.seq, current->id, 0, 0);
            }
            ++pos;
        }
        st.record_query(q.seq, q, 0, 0);
    }
    RunResult res;
    res.summary = st.summarize(workload.size(), st.registry.size());
    res.ledger = std::move(st.ledger);
    return res;
}

RunResult run_regret(const RunConfig& cfg, const Dataset& data, const std::vector<Query>& workload,
                     TraceWriter* trace, const CandidateSchedule* shared) {
    RunState st(cfg, trace);
    const Dataset sample = fitting_sample(data, cfg.sample_rows, child_seed(cfg.seed, 3));
    CandidateSchedule local;
    if (!shared) {
        local = build_candidate_schedule(sample, workload, cfg);
        shared = &local;
    }
    auto current = st.add_layout(generate_zorder(sample, {}, PartitionBudget{cfg.budget_k}), 0);
    st.serving = current;
    RegretLedger regret;
    std::vector<const Query*> history;  // queries serviced on the current layout
    std::size_t pos = 0;
    for (const auto& q : workload) {
        st.apply_pending(q.seq);
        while (pos < shared->items.size() && shared->items[pos].first == q.seq) {
            auto holder = st.add_layout(shared->items[pos].second, q.seq);
            double retro = 0.0;
            for (const Query* past : history)
                retro += query_cost(*current, *past) - query_cost(*holder, *past);
            regret.enter_candidate(holder->id, retro);
            ++pos;
        }
        const std::map<std::int64_t, double> costs = metadata_costs(st, q);
        if (auto target = regret_policy_step(regret, current->id, costs, cfg.alpha)) {
            current = st.registry.at(*target);
            st.record_switch(q.seq, *target, 0, 0);
            history.clear();
            for (auto& [id, saved] : regret.savings) saved = 0.0;  // rebase against the new layout
        }
        history.push_back(&q);
        st.record_query(q.seq, q, 0, 0, &costs);
    }
    RunResult res;
    res.summary = st.summarize(workload.size(), st.registry.size());
    res.ledger = std::move(st.ledger);
    return res;
}

RunResult run_offline_optimal(const RunConfig& cfg, const Dataset& data,
                              const std::vector<Query>& workload, TraceWriter* trace) {
    RunState st(cfg, trace);
    const Dataset sample = fitting_sample(data, cfg.sample_rows, child_seed(cfg.seed, 3));
    std::map<int, std::shared_ptr<const Layout>> by_template;
    for (auto& [t, layout] : template_layouts(sample, workload, PartitionBudget{cfg.budget_k})) {
        auto holder = st.add_layout(std::move(layout), 0);
        st.record_plain(-1, EventKind::Add, holder->id, 0, 0);
        by_template.emplace(t, holder);
    }

    std::optional<int> active_template;
    for (const auto& q : workload) {
        const int t = *q.template_id;
        if (!active_template) {
            st.serving = by_template.at(t);  // initial placement is free
            active_template = t;
        } else if (*active_template != t) {
            st.serving = by_template.at(t);
            st.record_switch(q.seq, st.serving->id, 0, 0);
            active_template = t;
        }
        st.record_query(q.seq, q, 0, 0);
    }
    RunResult res;
    res.summary = st.summarize(workload.size(), st.registry.size());
    res.ledger = std::move(st.ledger);
    return res;
}

RunResult run_parallel_q(const RunConfig& cfg, const Dataset& data,
                         const std::vector<Query>& workload, TraceWriter* trace) {
    RunState st(cfg, trace);
    const Dataset sample = fitting_sample(data, cfg.sample_rows, child_seed(cfg.seed, 3));
    std::vector<std::int64_t> ids;
    for (auto& [t, layout] : template_layouts(sample, workload, PartitionBudget{cfg.budget_k}))
        ids.push_back(st.add_layout(std::move(layout), 0)->id);
    ParallelQEngine engine({cfg.parallel_q, cfg.alpha, child_seed(cfg.seed, 1)}, ids);
    for (std::int64_t id : ids) st.record_plain(-1, EventKind::Add, id, 0, 0);

    for (const auto& q : workload) {
        const std::map<std::int64_t, double> costs = metadata_costs(st, q);
        const auto step = engine.on_query(costs);
        if (step.phase_reset) st.record_plain(q.seq, EventKind::PhaseReset, -1, engine.phase(), 0);
        for (std::int64_t target : step.switched_to) {
            st.ledger.record_switch(q.seq, target, engine.phase(), 0, cfg.alpha);
            st.emit(st.ledger.events.back());
        }
        // Multiple copies are held at once, so the fresh set serves at once.
        st.serving = st.registry.at(step.serving);
        st.record_query(q.seq, q, engine.phase(), 0, &costs);
    }
    RunResult res;
    res.summary = st.summarize(workload.size(), st.registry.size());
    res.ledger = std::move(st.ledger);
    return res;
}

}  // namespace

RunResult run_simulation(const RunConfig& cfg, const Dataset& data,
                         const std::vector<Query>& workload, TraceWriter* trace,
                         const CandidateSchedule* shared_candidates) {
    cfg.validate();
    if (workload.empty()) throw std::invalid_argument("workload is empty");
    if (data.num_rows() == 0) throw std::invalid_argument("dataset is empty");
    if (trace) trace->write_config(cfg, workload.size());
    switch (cfg.policy) {
        case PolicyKind::OReO:
        case PolicyKind::MtsOptimal:
            return run_engine_policy(cfg, data, workload, trace, shared_candidates);
        case PolicyKind::Static:
            return run_static(cfg, data, workload, trace);
        case PolicyKind::Greedy:
            return run_greedy(cfg, data, workload, trace, shared_candidates);
        case PolicyKind::Regret:
            return run_regret(cfg, data, workload, trace, shared_candidates);
        case PolicyKind::OfflineOptimal:
            return run_offline_optimal(cfg, data, workload, trace);
        case PolicyKind::ParallelQ:
            return run_parallel_q(cfg, data, workload, trace);
    }
    throw std::logic_error("unhandled policy");
}

ParsedTrace parse_trace(std::istream& in) {
    ParsedTrace out;
    std::string line;
    std::map<std::int64_t, bool> present;
    std::vector<std::map<std::int64_t, double>> rows;
    std::vector<std::vector<std::int64_t>> avail_rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const json j = json::parse(line);
        const std::string event = j.at("event").get<std::string>();
        if (event == "config") {
            out.alpha = j.at("alpha").get<double>();
            continue;
        }
        if (event == "add") {
            present[j.at("state_id").get<std::int64_t>()] = true;
        } else if (event == "remove") {
            present[j.at("state_id").get<std::int64_t>()] = false;
        } else if (event == "switch") {
            out.reorg_cost += j.at("cost").get<double>();
            out.switches += 1;
        } else if (event == "query") {
            out.query_cost += j.at("cost").get<double>();
            std::map<std::int64_t, double> costs;
            if (j.contains("costs"))
                for (const auto& [key, value] : j.at("costs").items())
                    costs[std::stoll(key)] = value.get<double>();
            std::vector<std::int64_t> avail;
            for (const auto& [id, here] : present)
                if (here) avail.push_back(id);
            if (avail.empty())  // traces without add events: states from costs
                for (const auto& [id, c] : costs) avail.push_back(id);
            rows.push_back(std::move(costs));
            avail_rows.push_back(std::move(avail));
        }
    }
    std::map<std::int64_t, std::size_t> index;
    for (const auto& row : rows)
        for (const auto& [id, c] : row) index.emplace(id, 0);
    out.instance.state_ids.clear();
    for (auto& [id, pos] : index) {
        pos = out.instance.state_ids.size();
        out.instance.state_ids.push_back(id);
    }
    out.instance.alpha = out.alpha;
    const std::size_t n = out.instance.state_ids.size();
    for (std::size_t t = 0; t < rows.size(); ++t) {
        std::vector<double> costs(n, 1.0);
        std::vector<std::uint8_t> avail(n, 0);
        for (const auto& [id, c] : rows[t]) costs[index.at(id)] = c;
        for (std::int64_t id : avail_rows[t]) avail[index.at(id)] = 1;
        out.instance.costs.push_back(std::move(costs));
        out.instance.available.push_back(std::move(avail));
    }
    return out;
}

ParsedTrace parse_trace_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    return parse_trace(in);
}

std::vector<Summary> sweep(const SweepGrid& grid, const Dataset& data,
                           const std::vector<Query>& workload, unsigned threads) {
    auto axis = [](auto values, auto base) {
        if (values.empty()) values.push_back(base);
        return values;
    };
    const auto alphas = axis(grid.alphas, grid.base.alpha);
    const auto gammas = axis(grid.gammas, grid.base.gamma);
    const auto epsilons = axis(grid.epsilons, grid.base.epsilon);
    const auto delays = axis(grid.delays, grid.base.delay);
    const auto sources = axis(grid.sources, grid.base.candidate_source);
    const auto qs = axis(grid.qs, grid.base.parallel_q);
    const auto seeds = axis(grid.seeds, grid.base.seed);

    std::vector<RunConfig> cells;
    for (double a : alphas)
        for (double g : gammas)
            for (double e : epsilons)
                for (std::size_t d : delays)
                    for (CandidateSource s : sources)
                        for (std::size_t q : qs)
                            for (std::uint64_t seed : seeds) {
                                RunConfig cfg = grid.base;
                                cfg.alpha = a;
                                cfg.gamma = g;
                                cfg.epsilon = e;
                                cfg.delay = d;
                                cfg.candidate_source = s;
                                cfg.parallel_q = q;
                                cfg.seed = seed;
                                cells.push_back(cfg);
                            }

    std::vector<Summary> results(cells.size());
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, cells.size());
    std::atomic<std::size_t> cursor{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= cells.size()) return;
            results[i] = run_simulation(cells[i], data, workload).summary;
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return results;
}

}  // namespace oreo
