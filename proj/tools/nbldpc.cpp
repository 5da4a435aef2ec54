// Command-line front end: code construction, floor bounds, and Monte Carlo
// sweeps for non-binary LDPC codes over GF(2^m) on MBIOS channels.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nbldpc/alist.hpp"
#include "nbldpc/analysis.hpp"
#include "nbldpc/channel.hpp"
#include "nbldpc/gf.hpp"
#include "nbldpc/graph.hpp"
#include "nbldpc/decoder.hpp"
#include "nbldpc/sim.hpp"

namespace {

using namespace nbldpc;

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

struct ChannelArgs {
    std::string channel = "awgn";
    std::vector<double> eps;
    std::vector<double> sigma2;
    std::vector<double> ebno_db;
    double rate = 0.0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--channel", channel, "bec|bsc|awgn")
            ->check(CLI::IsMember({"bec", "bsc", "awgn"}));
        cmd->add_option("--eps", eps, "erasure/crossover probabilities (bec|bsc grid)");
        cmd->add_option("--sigma2", sigma2, "AWGN noise variances (grid)");
        cmd->add_option("--ebno-db", ebno_db, "AWGN grid as Eb/N0 in dB (needs --rate)");
        cmd->add_option("--rate", rate, "code rate for the Eb/N0 conversion");
    }

    std::vector<double> points() const {
        if (channel == "awgn") {
            if (!ebno_db.empty()) {
                if (!(rate > 0.0))
                    throw CLI::ValidationError("--ebno-db requires a positive --rate");
                std::vector<double> p;
                for (double db : ebno_db) p.push_back(sigma2_from_ebno_db(db, rate));
                return p;
            }
            if (sigma2.empty()) throw CLI::ValidationError("awgn needs --sigma2 or --ebno-db");
            return sigma2;
        }
        if (eps.empty()) throw CLI::ValidationError(channel + " needs --eps");
        return eps;
    }
};

int finish_run(const SimConfig& cfg, const std::vector<SerRecord>& records, bool gnuplot) {
    write_results(cfg, records);
    std::cout << csv_string(records);
    if (gnuplot) {
        const std::string dat = points_string(records);
        if (!cfg.out.empty()) {
            std::ofstream f(cfg.out + ".dat");
            f << dat;
        } else {
            std::cout << dat;
        }
    }
    bool low = false;
    for (const auto& r : records) low = low || r.low_confidence;
    if (low && !cfg.allow_low_confidence) {
        std::cerr << "low-confidence record(s): error-event target not reached within budget "
                     "(pass --allow-low-confidence to accept)\n";
        return 2;
    }
    return 0;
}

// one JSON line per iteration with every symbol's hard decision
void dump_zigzag_trace(const SimConfig& cfg, const std::string& path) {
    const FieldParams params = FieldParams::make(cfg.m);
    std::vector<FieldElement> gammas;
    for (int e : cfg.gamma_exps) gammas.push_back(params.alpha_pow(e));
    Rng rng = derive_rng(cfg.seed, 0, 0, 0);
    const auto ch = cfg.channel_at(0);
    const auto blk = sample_llr_block(ch, cfg.s, cfg.m, rng);
    std::vector<MessageVector> init;
    for (int v = 0; v < cfg.s; ++v) init.push_back(initial_message(blk.symbol(v)));

    FieldElement beta{1};
    for (auto g : gammas) beta = params.mul(beta, g);
    DecoderConfig dc;
    dc.ec_window = std::max(cfg.ec_window, cfg.s * params.order(beta) + 1);
    dc.max_iter = std::max(cfg.max_iter, 6 * dc.ec_window);
    dc.tie_break_seed = derive_seed(cfg.seed, 0, 0, 1);
    dc.record_trace = true;
    Decoder dec(make_zigzag_graph(params, gammas), params, dc);
    const auto res = dec.decode(init);

    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    for (std::size_t it = 0; it < res.trace.size(); ++it) {
        f << "{\"iter\":" << it << ",\"decisions\":[";
        for (std::size_t v = 0; v < res.trace[it].size(); ++v)
            f << (v ? "," : "") << res.trace[it][v].value;
        f << "]}\n";
    }
    std::cerr << "trace: " << res.trace.size() << " iterations written to " << path << '\n';
}

int cmd_field(int m, std::uint32_t poly) {
    const FieldParams params = poly ? FieldParams::make(m, poly) : FieldParams::make(m);
    const auto bad = params.bad_cycle_params();
    std::cout << "GF(2^" << m << "), " << bad.size() << " nonzero elements of non-maximal order:\n";
    bool first = true;
    for (auto b : bad) {
        const int e = params.log(b);
        std::cout << (first ? "" : ", ");
        if (e == 0)
            std::cout << "1";
        else
            std::cout << "a^" << e;
        first = false;
    }
    std::cout << "\nexponents:";
    for (auto b : bad) std::cout << ' ' << params.log(b);
    std::cout << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"non-binary LDPC toolkit: zigzag-cycle analysis, expurgated code design, "
                 "error-floor bounds, Monte Carlo SER sweeps"};
    app.require_subcommand(1);

    // field
    auto* field = app.add_subcommand("field", "print the bad cycle-parameter set of GF(2^m)");
    int field_m = 4;
    std::uint32_t field_poly = 0;
    field->add_option("--m", field_m, "extension degree (2..10)")->required();
    field->add_option("--poly", field_poly, "primitive polynomial bit mask override");

    // design
    auto* design = app.add_subcommand("design", "draw an expurgated code and emit extended alist");
    struct {
        int N = 315, m = 4, sg = 1, sc = 8;
        std::string lambda = "x", rho = "x^2", hset = "hm", out;
        std::uint64_t seed = 1;
    } dz;
    design->add_option("--N", dz.N, "symbol code length")->required();
    design->add_option("--m", dz.m, "extension degree");
    design->add_option("--lambda", dz.lambda, "variable edge-degree polynomial");
    design->add_option("--rho", dz.rho, "check edge-degree polynomial");
    design->add_option("--sg", dz.sg, "stopping-set expurgation parameter");
    design->add_option("--sc", dz.sc, "label expurgation parameter");
    design->add_option("--hset", dz.hset, "forbidden cycle parameters: hm|one|none|exponent list");
    design->add_option("--seed", dz.seed, "random seed");
    design->add_option("--out", dz.out, "output path (default stdout)");

    // bound
    auto* bound = app.add_subcommand("bound", "error-floor lower bound, per-weight CSV");
    struct {
        int N = 315, m = 4, sg = 1, smax = -1;
        std::string lambda = "x", rho = "x^2", out;
    } bz;
    ChannelArgs bound_ch;
    bound_ch.attach(bound);
    bound->add_option("--N", bz.N, "symbol code length")->required();
    bound->add_option("--m", bz.m, "extension degree");
    bound->add_option("--lambda", bz.lambda, "variable edge-degree polynomial");
    bound->add_option("--rho", bz.rho, "check edge-degree polynomial");
    bound->add_option("--sg", bz.sg, "series start weight");
    bound->add_option("--smax", bz.smax, "truncation weight (default: auto)");
    bound->add_option("--out", bz.out, "output base path");

    // zigzag
    auto* zig = app.add_subcommand("zigzag", "zigzag cycle code SER sweep");
    SimConfig zc;
    zc.experiment = "zigzag";
    ChannelArgs zig_ch;
    zig_ch.attach(zig);
    int beta_exp = 0;
    bool zig_beta_given = false;
    std::string zig_config;
    bool zig_gnuplot = false;
    std::string zig_trace;
    zig->add_option("--config", zig_config, "rerun from a JSON sidecar");
    zig->add_option("--dump-trace", zig_trace,
                    "debug: decode one noise draw with the bp engine and write the "
                    "per-iteration decision trace as JSON lines");
    zig->add_option("--s", zc.s, "symbol code length");
    zig->add_option("--m", zc.m, "extension degree");
    zig->add_option("--beta-exp", beta_exp, "cycle parameter alpha^k (labels synthesized)")
        ->each([&](const std::string&) { zig_beta_given = true; });
    zig->add_option("--gammas", zc.gamma_exps, "explicit step-ratio exponents, one per symbol");
    zig->add_option("--engine", zc.engine, "predicate|bp")
        ->check(CLI::IsMember({"predicate", "bp"}));
    zig->add_option("--trials", zc.trials, "trial budget per point");
    zig->add_option("--min-errors", zc.min_errors, "error events before early stop");
    zig->add_option("--seed", zc.seed, "master seed");
    zig->add_option("--max-iter", zc.max_iter, "BP iteration cap (bp engine)");
    zig->add_option("--ec-window", zc.ec_window, "eventually-correct window (bp engine)");
    zig->add_flag("--serial", zc.serial, "force the serial execution path");
    zig->add_flag("--allow-low-confidence", zc.allow_low_confidence);
    zig->add_flag("--gnuplot,--points", zig_gnuplot, "also emit two-column plot data");
    zig->add_option("--out", zc.out, "output base path (.csv/.json)");

    // ensemble
    auto* ens = app.add_subcommand("ensemble", "expurgated-ensemble SER sweep with bound overlay");
    SimConfig ec;
    ec.experiment = "ensemble";
    ChannelArgs ens_ch;
    ens_ch.attach(ens);
    std::string ens_config;
    bool ens_gnuplot = false;
    ens->add_option("--config", ens_config, "rerun from a JSON sidecar");
    ens->add_option("--N", ec.N, "symbol code length");
    ens->add_option("--m", ec.m, "extension degree");
    ens->add_option("--lambda", ec.lambda, "variable edge-degree polynomial");
    ens->add_option("--rho", ec.rho, "check edge-degree polynomial");
    ens->add_option("--sg", ec.s_g, "stopping-set expurgation parameter");
    ens->add_option("--sc", ec.s_c, "label expurgation parameter");
    ens->add_option("--hset", ec.hset, "hm|one|none|exponent list");
    ens->add_option("--trials", ec.trials, "codeword trials per point");
    ens->add_option("--min-errors", ec.min_errors, "error events before early stop");
    ens->add_option("--seed", ec.seed, "master seed");
    ens->add_option("--max-iter", ec.max_iter, "BP iteration cap");
    ens->add_option("--ec-window", ec.ec_window, "eventually-correct window");
    ens->add_flag("--fixed-code", ec.fixed_code, "evaluate one sampled code instead of the ensemble average");
    ens->add_flag("--serial", ec.serial, "force the serial execution path");
    ens->add_flag("--allow-low-confidence", ec.allow_low_confidence);
    ens->add_flag("--gnuplot,--points", ens_gnuplot, "also emit two-column plot data");
    ens->add_option("--out", ec.out, "output base path (.csv/.json)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(field)) return cmd_field(field_m, field_poly);

        if (app.got_subcommand(design)) {
            const FieldParams params = FieldParams::make(dz.m);
            SimConfig helper;
            helper.hset = dz.hset;
            EnsembleSpec spec;
            spec.N = dz.N;
            spec.m = dz.m;
            spec.dd = DegreeDistPair::parse(dz.lambda, dz.rho);
            spec.s_g = dz.sg;
            spec.s_c = dz.sc;
            spec.forbidden = helper.forbidden_set(params);
            Rng rng(derive_seed(dz.seed, 0xde51));
            ExpurgateDiagnostics diag;
            const TannerGraph g = expurgate(spec, params, rng, &diag);
            const std::string text = export_code(g, params);
            if (dz.out.empty()) {
                std::cout << text;
            } else {
                std::ofstream f(dz.out);
                if (!f) throw std::runtime_error("cannot write " + dz.out);
                f << text;
            }
            std::cerr << "graph attempts: " << diag.graph_attempts
                      << ", label sweeps: " << diag.label_sweeps << '\n';
            return 0;
        }

        if (app.got_subcommand(bound)) {
            const auto points = bound_ch.points();
            const FieldParams params = FieldParams::make(bz.m);
            EnsembleSpec spec;
            spec.N = bz.N;
            spec.m = bz.m;
            spec.dd = DegreeDistPair::parse(bz.lambda, bz.rho);
            spec.s_g = bz.sg;
            spec.s_c = bz.sg;  // bound depends only on s_g
            std::ostringstream out;
            out << "channel_param,weight,term,total,tail_estimate,convergent\n";
            for (double p : points) {
                const ChannelModel ch = ChannelModel::make(
                    bound_ch.channel == "bec" ? ChannelKind::BEC
                    : bound_ch.channel == "bsc" ? ChannelKind::BSC
                                                : ChannelKind::BiAWGN,
                    p);
                const FloorBound fb = floor_bound_general(spec, ch, bz.smax);
                for (std::size_t i = 0; i < fb.terms.size(); ++i) {
                    char buf[64];
                    std::snprintf(buf, sizeof buf, "%.12g,%d,%.12g,,,\n", p,
                                  fb.s_start + static_cast<int>(i), fb.terms[i]);
                    out << buf;
                }
                char buf[96];
                std::snprintf(buf, sizeof buf, "%.12g,,,%.12g,%.12g,%d\n", p, fb.value,
                              fb.tail_estimate, fb.convergent ? 1 : 0);
                out << buf;
            }
            if (bz.out.empty()) {
                std::cout << out.str();
            } else {
                std::ofstream f(bz.out + ".csv");
                if (!f) throw std::runtime_error("cannot write " + bz.out + ".csv");
                f << out.str();
            }
            return 0;
        }

        if (app.got_subcommand(zig)) {
            SimConfig cfg = zc;
            if (!zig_config.empty()) {
                cfg = SimConfig::from_json(slurp(zig_config));
            } else {
                cfg.points = zig_ch.points();
                cfg.channel = zig_ch.channel;
                if (cfg.gamma_exps.empty())
                    cfg.gamma_exps = SimConfig::gammas_from_beta_exp(cfg.s, zig_beta_given ? beta_exp : 1);
            }
            if (!zig_trace.empty()) dump_zigzag_trace(cfg, zig_trace);
            return finish_run(cfg, run_zigzag(cfg), zig_gnuplot);
        }

        if (app.got_subcommand(ens)) {
            SimConfig cfg = ec;
            if (!ens_config.empty()) {
                cfg = SimConfig::from_json(slurp(ens_config));
            } else {
                cfg.points = ens_ch.points();
                cfg.channel = ens_ch.channel;
            }
            return finish_run(cfg, run_ensemble(cfg), ens_gnuplot);
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 1;
    }
    return 0;
}
