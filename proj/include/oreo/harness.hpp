#pragma once

#include <iosfwd>
#include <memory>
#include <string>

#include "oreo/engine.hpp"
#include "oreo/manager.hpp"
#include "oreo/policies.hpp"
#include "oreo/workload.hpp"

namespace oreo {

struct RunConfig {
    double alpha = 80.0;
    double gamma = 1.0;
    double epsilon = 0.08;
    std::size_t window_w = 200;
    std::size_t regen_period = 100;
    std::size_t delay = 0;  // queries served on the outdated layout per switch
    std::size_t budget_k = 32;
    std::uint64_t seed = 0;
    PolicyKind policy = PolicyKind::OReO;
    std::size_t reservoir_r = 64;
    double lambda = 0.01;
    std::size_t parallel_q = 1;
    bool stay_on_reset = true;
    bool prune = true;
    bool use_zorder = false;
    CandidateSource candidate_source = CandidateSource::Window;
    // Rows subsampled from the dataset for layout fitting (0 = whole set).
    std::size_t sample_rows = 2000;
    std::size_t max_cuts = 256;

    void validate() const;
};

RunConfig run_config_from_kv(const std::map<std::string, std::string>& kv);

struct Summary {
    std::string policy;
    std::uint64_t seed = 0;
    double alpha = 0, gamma = 0, epsilon = 0;
    std::size_t delay = 0;
    std::size_t queries = 0;
    double query_cost = 0, reorg_cost = 0, total = 0;
    std::size_t switches = 0, phases = 0, adds = 0, removes = 0;
    std::size_t states_final = 0, states_peak = 0;

    static std::string csv_header();
    std::string csv_row() const;
};

// Streams trace events as JSONL; the first line is a config record.
class TraceWriter {
  public:
    explicit TraceWriter(std::ostream& out) : out_(&out) {}
    void write_config(const RunConfig& cfg, std::size_t num_queries);
    void write_event(const TraceEvent& e);

  private:
    std::ostream* out_;
};

struct RunResult {
    CostLedger ledger;
    Summary summary;
};

// One fit per regeneration boundary over the sliding window, shared by the
// online policies in a comparison.
CandidateSchedule build_candidate_schedule(const Dataset& sample,
                                           const std::vector<Query>& workload,
                                           const RunConfig& cfg);

// Deterministic row subsample used for all layout fitting in a run.
Dataset fitting_sample(const Dataset& data, std::size_t rows, std::uint64_t seed);

// Runs one policy over the workload, recording the trace when a writer is
// given. A switch decided at seq t serves queries [t, t + delay) on the old
// layout; its movement charge books at t.
RunResult run_simulation(const RunConfig& cfg, const Dataset& data,
                         const std::vector<Query>& workload, TraceWriter* trace = nullptr,
                         const CandidateSchedule* shared_candidates = nullptr);

// Totals recomputed from a trace stream plus the instance the offline
// oracle needs.
struct ParsedTrace {
    double alpha = 0.0;
    double query_cost = 0.0;
    double reorg_cost = 0.0;
    std::size_t switches = 0;
    DpInstance instance;  // query events only, availability from add/remove
};

ParsedTrace parse_trace(std::istream& in);
ParsedTrace parse_trace_file(const std::string& path);

struct SweepGrid {
    RunConfig base;
    std::vector<double> alphas;
    std::vector<double> gammas;
    std::vector<double> epsilons;
    std::vector<std::size_t> delays;
    std::vector<CandidateSource> sources;
    std::vector<std::size_t> qs;
    std::vector<std::uint64_t> seeds;
};

// Cross product of the grid axes (empty axes pin the base value), one
// summary per cell, cells run on a small thread pool.
std::vector<Summary> sweep(const SweepGrid& grid, const Dataset& data,
                           const std::vector<Query>& workload, unsigned threads = 0);

}  // namespace oreo
