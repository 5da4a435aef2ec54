#include "nbldpc/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nbldpc {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kMaxZigzagLlrs = 128;

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

ChannelKind channel_kind_from_name(const std::string& name) {
    if (name == "bec") return ChannelKind::BEC;
    if (name == "bsc") return ChannelKind::BSC;
    if (name == "awgn") return ChannelKind::BiAWGN;
    throw std::invalid_argument("unknown channel '" + name + "' (want bec|bsc|awgn)");
}

}  // namespace

WilsonInterval wilson_interval(std::uint64_t errors, std::uint64_t n) {
    if (n == 0) return {0.0, 1.0};
    constexpr double z = 1.959963984540054;  // 97.5% normal quantile
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(errors) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    WilsonInterval ci{std::max(0.0, center - half), std::min(1.0, center + half)};
    if (errors == 0) ci.low = 0.0;  // exact endpoints, no sqrt round-off
    if (errors == n) ci.high = 1.0;
    return ci;
}

SerRecord make_record(double channel_param, std::uint64_t errors, std::uint64_t observed,
                      std::uint64_t seed, const std::string& engine, std::uint64_t min_errors) {
    SerRecord r;
    r.channel_param = channel_param;
    r.symbol_errors = errors;
    r.symbols_observed = observed;
    r.ser = observed ? static_cast<double>(errors) / static_cast<double>(observed) : 0.0;
    const auto ci = wilson_interval(errors, observed);
    r.ci_low = ci.low;
    r.ci_high = ci.high;
    r.bound = kNaN;
    r.seed = seed;
    r.engine = engine;
    r.low_confidence = errors < min_errors;
    return r;
}

// ------------------------------------------------------------------ config

std::vector<int> SimConfig::gammas_from_beta_exp(int s, int beta_exp) {
    std::vector<int> g(static_cast<std::size_t>(s), 0);
    g[0] = beta_exp;
    return g;
}

ChannelModel SimConfig::channel_at(std::size_t point) const {
    if (point >= points.size()) throw std::out_of_range("channel grid point out of range");
    return ChannelModel::make(channel_kind_from_name(channel), points[point]);
}

std::vector<FieldElement> SimConfig::forbidden_set(const FieldParams& params) const {
    if (hset == "hm") return params.bad_cycle_params();
    if (hset == "one") return {FieldElement{1}};
    if (hset == "none") return {};
    std::vector<FieldElement> out;
    std::stringstream ss(hset);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(params.alpha_pow(std::stol(tok)));
    }
    return out;
}

EnsembleSpec SimConfig::ensemble_spec(const FieldParams& params) const {
    EnsembleSpec spec;
    spec.N = N;
    spec.m = m;
    spec.dd = DegreeDistPair::parse(lambda, rho);
    spec.s_g = s_g;
    spec.s_c = s_c;
    spec.forbidden = forbidden_set(params);
    return spec;
}

std::string SimConfig::to_json() const {
    nlohmann::json j;
    j["experiment"] = experiment;
    j["channel"] = channel;
    j["points"] = points;
    j["trials"] = trials;
    j["min_errors"] = min_errors;
    j["seed"] = seed;
    j["serial"] = serial;
    j["allow_low_confidence"] = allow_low_confidence;
    j["max_iter"] = max_iter;
    j["ec_window"] = ec_window;
    j["use_fast_transform"] = use_fast_transform;
    j["s"] = s;
    j["m"] = m;
    j["gamma_exps"] = gamma_exps;
    j["engine"] = engine;
    j["N"] = N;
    j["lambda"] = lambda;
    j["rho"] = rho;
    j["s_g"] = s_g;
    j["s_c"] = s_c;
    j["hset"] = hset;
    j["fixed_code"] = fixed_code;
    j["smax"] = smax;
    j["out"] = out;
    return j.dump(2);
}

SimConfig SimConfig::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    SimConfig c;
    c.experiment = j.value("experiment", c.experiment);
    c.channel = j.value("channel", c.channel);
    c.points = j.value("points", c.points);
    c.trials = j.value("trials", c.trials);
    c.min_errors = j.value("min_errors", c.min_errors);
    c.seed = j.value("seed", c.seed);
    c.serial = j.value("serial", c.serial);
    c.allow_low_confidence = j.value("allow_low_confidence", c.allow_low_confidence);
    c.max_iter = j.value("max_iter", c.max_iter);
    c.ec_window = j.value("ec_window", c.ec_window);
    c.use_fast_transform = j.value("use_fast_transform", c.use_fast_transform);
    c.s = j.value("s", c.s);
    c.m = j.value("m", c.m);
    c.gamma_exps = j.value("gamma_exps", c.gamma_exps);
    c.engine = j.value("engine", c.engine);
    c.N = j.value("N", c.N);
    c.lambda = j.value("lambda", c.lambda);
    c.rho = j.value("rho", c.rho);
    c.s_g = j.value("s_g", c.s_g);
    c.s_c = j.value("s_c", c.s_c);
    c.hset = j.value("hset", c.hset);
    c.fixed_code = j.value("fixed_code", c.fixed_code);
    c.smax = j.value("smax", c.smax);
    c.out = j.value("out", c.out);
    return c;
}

// ------------------------------------------------------------- trial loops

namespace {

struct Counts {
    std::uint64_t errors = 0;
    std::uint64_t observed = 0;
    std::uint64_t skipped = 0;
};

// Runs trials in fixed-size batches until the budget is spent or the
// stopping rule fires (min error events reached and relative CI width below
// 20%). Checks only at batch boundaries so the outcome is independent of
// scheduling; the OpenMP and serial paths see identical batches and the
// per-trial work depends only on (seed, point, trial).
template <typename TrialFn>
Counts run_batched(const SimConfig& cfg, std::uint64_t batch_size, TrialFn&& trial) {
    Counts total;
    std::uint64_t done = 0;
    while (done < cfg.trials) {
        const std::uint64_t batch = std::min<std::uint64_t>(batch_size, cfg.trials - done);
        std::uint64_t err = 0, obs = 0, skip = 0;
        const long long lo = static_cast<long long>(done);
        const long long hi = static_cast<long long>(done + batch);
        if (cfg.serial) {
            for (long long t = lo; t < hi; ++t) trial(static_cast<std::uint64_t>(t), err, obs, skip);
        } else {
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : err, obs, skip)
            for (long long t = lo; t < hi; ++t) trial(static_cast<std::uint64_t>(t), err, obs, skip);
        }
        total.errors += err;
        total.observed += obs;
        total.skipped += skip;
        done += batch;
        if (total.errors >= cfg.min_errors && total.observed > 0) {
            const double ser =
                static_cast<double>(total.errors) / static_cast<double>(total.observed);
            const auto ci = wilson_interval(total.errors, total.observed);
            if (ser > 0.0 && (ci.high - ci.low) / ser < 0.2) break;
        }
    }
    return total;
}

}  // namespace

std::vector<SerRecord> run_zigzag(const SimConfig& cfg) {
    if (cfg.experiment != "zigzag") throw std::invalid_argument("run_zigzag: wrong experiment");
    if (cfg.points.empty()) throw std::invalid_argument("empty channel grid");
    if (cfg.trials < 1) throw std::invalid_argument("trial budget must be >= 1");
    const FieldParams params = FieldParams::make(cfg.m);
    if (static_cast<int>(cfg.gamma_exps.size()) != cfg.s)
        throw std::invalid_argument("run_zigzag: need one gamma exponent per symbol");
    if (cfg.s < 1 || cfg.s * cfg.m > kMaxZigzagLlrs)
        throw std::invalid_argument("run_zigzag: need 1 <= s and s*m <= " +
                                    std::to_string(kMaxZigzagLlrs));

    std::vector<FieldElement> gammas;
    for (int e : cfg.gamma_exps) gammas.push_back(params.alpha_pow(e));

    FieldElement beta{1};
    for (auto g : gammas) beta = params.mul(beta, g);
    const int sigma = params.order(beta);
    const bool max_order = sigma == params.q() - 1;
    const bool bp = cfg.engine == "bp";
    if (!bp && cfg.engine != "predicate")
        throw std::invalid_argument("run_zigzag: engine must be predicate|bp");

    TannerGraph graph = make_zigzag_graph(params, gammas);
    DecoderConfig dc;
    dc.use_fast_transform = cfg.use_fast_transform;
    // the decision dynamics have period s*sigma; the window must span it
    dc.ec_window = std::max(cfg.ec_window, cfg.s * sigma + 1);
    dc.max_iter = std::max(cfg.max_iter, 6 * dc.ec_window);

    std::vector<SerRecord> records;
    for (std::size_t pt = 0; pt < cfg.points.size(); ++pt) {
        const ChannelModel ch = cfg.channel_at(pt);
        const double t0 = now_seconds();
        const auto counts = run_batched(
            cfg, bp ? 1024 : 65536,
            [&](std::uint64_t trial, std::uint64_t& err, std::uint64_t& obs, std::uint64_t& skip) {
                (void)skip;
                Rng rng = derive_rng(cfg.seed, pt, trial, 0);
                const int n_llr = cfg.s * cfg.m;
                double llrs[kMaxZigzagLlrs];
                for (int i = 0; i < n_llr; ++i) llrs[i] = ch.sample_llr(rng);
                std::span<const double> zspan{llrs, static_cast<std::size_t>(n_llr)};
                if (!bp) {
                    const auto pr = max_order ? llr_sum_predicate(zspan)
                                              : zigzag_success_predicate_llr(params, gammas, zspan);
                    if (pr.verdict == Verdict::NoneCorrect)
                        err += static_cast<std::uint64_t>(cfg.s);
                    obs += static_cast<std::uint64_t>(cfg.s);
                } else {
                    std::vector<MessageVector> init;
                    init.reserve(static_cast<std::size_t>(cfg.s));
                    for (int k = 0; k < cfg.s; ++k)
                        init.push_back(initial_message(zspan.subspan(
                            static_cast<std::size_t>(k) * cfg.m, static_cast<std::size_t>(cfg.m))));
                    DecoderConfig d = dc;
                    d.tie_break_seed = derive_seed(cfg.seed, pt, trial, 1);
                    Decoder dec(graph, params, d);
                    const auto res = dec.decode(init);
                    for (auto ec : res.eventually_correct)
                        if (!ec) ++err;
                    obs += static_cast<std::uint64_t>(cfg.s);
                }
            });
        auto rec = make_record(cfg.points[pt], counts.errors, counts.observed, cfg.seed,
                               bp ? "bp" : "predicate", cfg.min_errors);
        rec.wall_time = now_seconds() - t0;
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<SerRecord> run_ensemble(const SimConfig& cfg) {
    if (cfg.experiment != "ensemble") throw std::invalid_argument("run_ensemble: wrong experiment");
    if (cfg.points.empty()) throw std::invalid_argument("empty channel grid");
    if (cfg.trials < 1) throw std::invalid_argument("trial budget must be >= 1");
    const FieldParams params = FieldParams::make(cfg.m);
    const EnsembleSpec spec = cfg.ensemble_spec(params);
    spec.validate(params);

    DecoderConfig base_dc;
    base_dc.max_iter = cfg.max_iter;
    base_dc.ec_window = cfg.ec_window;
    base_dc.use_fast_transform = cfg.use_fast_transform;

    std::vector<SerRecord> records;
    for (std::size_t pt = 0; pt < cfg.points.size(); ++pt) {
        const ChannelModel ch = cfg.channel_at(pt);
        const double t0 = now_seconds();

        TannerGraph fixed;
        if (cfg.fixed_code) {
            Rng rng = derive_rng(cfg.seed, pt, 0, 3);
            fixed = expurgate(spec, params, rng);
        }

        const auto counts = run_batched(
            cfg, 64,
            [&](std::uint64_t trial, std::uint64_t& err, std::uint64_t& obs, std::uint64_t& skip) {
                Rng rng = derive_rng(cfg.seed, pt, trial, 0);
                const TannerGraph* g = &fixed;
                TannerGraph own;
                if (!cfg.fixed_code) {
                    try {
                        own = expurgate(spec, params, rng);
                    } catch (const std::runtime_error&) {
                        ++skip;
                        return;
                    }
                    g = &own;
                }
                const LlrBlock blk = sample_llr_block(ch, cfg.N, cfg.m, rng);
                std::vector<MessageVector> init;
                init.reserve(static_cast<std::size_t>(cfg.N));
                for (int v = 0; v < cfg.N; ++v) init.push_back(initial_message(blk.symbol(v)));
                DecoderConfig d = base_dc;
                d.tie_break_seed = derive_seed(cfg.seed, pt, trial, 1);
                Decoder dec(*g, params, d);
                const auto res = dec.decode(init);
                for (auto ec : res.eventually_correct)
                    if (!ec) ++err;
                obs += static_cast<std::uint64_t>(cfg.N);
            });

        auto rec = make_record(cfg.points[pt], counts.errors, counts.observed, cfg.seed, "bp",
                               cfg.min_errors);
        rec.skipped_trials = counts.skipped;
        switch (ch.kind()) {
            case ChannelKind::BSC: rec.bound = floor_bound_bsc(spec, cfg.points[pt], cfg.smax).value; break;
            case ChannelKind::BiAWGN: rec.bound = floor_bound_awgn(spec, cfg.points[pt], cfg.smax).value; break;
            case ChannelKind::BEC: rec.bound = floor_bound_general(spec, ch, cfg.smax).value; break;
        }
        rec.wall_time = now_seconds() - t0;
        records.push_back(std::move(rec));
    }
    return records;
}

// ------------------------------------------------------------- persistence

std::string csv_string(const std::vector<SerRecord>& records) {
    std::ostringstream out;
    out << "channel_param,ser,ci_low,ci_high,bound,errors,observed,seed,engine,wall_time\n";
    for (const auto& r : records) {
        out << format_double(r.channel_param) << ',' << format_double(r.ser) << ','
            << format_double(r.ci_low) << ',' << format_double(r.ci_high) << ',';
        if (!std::isnan(r.bound)) out << format_double(r.bound);
        out << ',' << r.symbol_errors << ',' << r.symbols_observed << ',' << r.seed << ','
            << r.engine << ',';
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3f", r.wall_time);
        out << buf << '\n';
    }
    return out.str();
}

std::string points_string(const std::vector<SerRecord>& records) {
    std::ostringstream out;
    for (const auto& r : records)
        out << format_double(r.channel_param) << ' ' << format_double(r.ser) << '\n';
    return out.str();
}

void write_results(const SimConfig& cfg, const std::vector<SerRecord>& records) {
    if (cfg.out.empty()) return;
    {
        std::ofstream f(cfg.out + ".csv");
        if (!f) throw std::runtime_error("cannot write " + cfg.out + ".csv");
        f << csv_string(records);
    }
    {
        std::ofstream f(cfg.out + ".json");
        if (!f) throw std::runtime_error("cannot write " + cfg.out + ".json");
        f << cfg.to_json() << '\n';
    }
}

}  // namespace nbldpc
