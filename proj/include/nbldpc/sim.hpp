#ifndef NBLDPC_SIM_HPP
#define NBLDPC_SIM_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "nbldpc/analysis.hpp"
#include "nbldpc/channel.hpp"
#include "nbldpc/decoder.hpp"
#include "nbldpc/graph.hpp"

namespace nbldpc {

struct WilsonInterval {
    double low = 0.0;
    double high = 0.0;
};

/// 95% Wilson score interval for errors/n.
WilsonInterval wilson_interval(std::uint64_t errors, std::uint64_t n);

struct SerRecord {
    double channel_param = 0.0;
    std::uint64_t symbol_errors = 0;
    std::uint64_t symbols_observed = 0;
    std::uint64_t skipped_trials = 0;  // construction failures, diagnostics only
    double ser = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double bound = 0.0;           // NaN when not applicable (empty CSV cell)
    std::uint64_t seed = 0;
    std::string engine;           // "predicate" or "bp"
    double wall_time = 0.0;       // seconds; excluded from the determinism contract
    bool low_confidence = false;  // budget exhausted before min error events
};

/// Assembles estimate + Wilson CI + confidence flag from raw counts.
SerRecord make_record(double channel_param, std::uint64_t errors, std::uint64_t observed,
                      std::uint64_t seed, const std::string& engine, std::uint64_t min_errors);

/// One experiment description; serializes losslessly to the JSON sidecar so
/// a run can be reproduced exactly (same seed derivation, same batching).
struct SimConfig {
    std::string experiment = "zigzag";  // zigzag | ensemble | bound
    std::string channel = "awgn";       // bec | bsc | awgn
    std::vector<double> points;         // eps or sigma2 per grid point

    std::uint64_t trials = 100000;  // symbols observed = trials * s (zigzag) or trials * N
    std::uint64_t min_errors = 100;
    std::uint64_t seed = 1;
    bool serial = false;  // force the serial reference path
    bool allow_low_confidence = false;

    // decoder settings (bp engine)
    int max_iter = 200;
    int ec_window = 8;
    bool use_fast_transform = true;

    // zigzag experiment
    int s = 3;
    int m = 4;
    std::vector<int> gamma_exps;        // step-ratio exponents, one per symbol
    std::string engine = "predicate";   // predicate | bp

    // ensemble / bound experiment
    int N = 315;
    std::string lambda = "x";
    std::string rho = "x^2";
    int s_g = 1;
    int s_c = 8;
    std::string hset = "hm";  // hm | one | none | comma-separated exponents
    bool fixed_code = false;
    int smax = -1;  // bound truncation override

    std::string out;  // output base path; empty = no files

    std::string to_json() const;
    static SimConfig from_json(const std::string& text);

    /// gamma exponents for "cycle parameter alpha^k": first step alpha^k,
    /// the rest identity.
    static std::vector<int> gammas_from_beta_exp(int s, int beta_exp);

    ChannelModel channel_at(std::size_t point) const;
    std::vector<FieldElement> forbidden_set(const FieldParams& params) const;
    EnsembleSpec ensemble_spec(const FieldParams& params) const;
};

/// Zigzag cycle code sweep over the channel grid. Engine "predicate"
/// evaluates the closed-form success condition per sampled noise draw;
/// engine "bp" runs the full decoder on the realized cycle graph with the
/// eventually-correct window widened to cover the cycle period.
std::vector<SerRecord> run_zigzag(const SimConfig& cfg);

/// Expurgated-ensemble sweep: per trial a fresh code is drawn from the
/// ensemble (or one fixed code per point with fixed_code), the all-zero
/// word is transmitted, and symbols not eventually correct are counted.
/// Each record carries the matching analytic floor bound.
std::vector<SerRecord> run_ensemble(const SimConfig& cfg);

std::string csv_string(const std::vector<SerRecord>& records);
void write_results(const SimConfig& cfg, const std::vector<SerRecord>& records);

/// Plot-ready two-column data (channel_param ser).
std::string points_string(const std::vector<SerRecord>& records);

}  // namespace nbldpc

#endif
