// Kernel benchmark: OpenMP trial loops against the serial reference path,
// and the fast-transform check node against the direct-convolution one.
// Counts are asserted equal while timing, so this doubles as a smoke test.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "nbldpc/channel.hpp"
#include "nbldpc/decoder.hpp"
#include "nbldpc/graph.hpp"
#include "nbldpc/message.hpp"
#include "nbldpc/rng.hpp"
#include "nbldpc/sim.hpp"

using namespace nbldpc;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <typename F>
double timed(F&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    return seconds_since(t0);
}

void bench_convolution() {
    std::printf("-- check-node convolution, 200k convolutions per variant\n");
    Rng rng(1);
    for (int m : {4, 6, 8}) {
        const int q = 1 << m;
        MessageVector a(q), b(q);
        for (int x = 0; x < q; ++x) {
            a[x] = rng.uniform() + 1e-9;
            b[x] = rng.uniform() + 1e-9;
        }
        a.normalize();
        b.normalize();
        volatile double sink = 0.0;
        const int reps = 200000;
        const double t_fast = timed([&] {
            for (int i = 0; i < reps; ++i) sink = sink + xor_convolve(a, b)[0];
        });
        const double t_ref = timed([&] {
            for (int i = 0; i < reps; ++i) sink = sink + xor_convolve_direct(a, b)[0];
        });
        std::printf("   m=%d: fast %8.1f kops/s   direct %8.1f kops/s   speedup %.1fx\n", m,
                    reps / t_fast / 1e3, reps / t_ref / 1e3, t_ref / t_fast);
    }
}

void bench_zigzag_trials() {
    std::printf("-- zigzag predicate engine, 2M trials per mode\n");
    SimConfig cfg;
    cfg.experiment = "zigzag";
    cfg.channel = "awgn";
    cfg.points = {1.0};
    cfg.trials = 2000000;
    cfg.min_errors = 1ull << 62;
    cfg.seed = 42;
    cfg.s = 3;
    cfg.m = 4;
    cfg.gamma_exps = {1, 0, 0};

    std::vector<SerRecord> par, ser;
    const double t_par = timed([&] { par = run_zigzag(cfg); });
    cfg.serial = true;
    const double t_ser = timed([&] { ser = run_zigzag(cfg); });
    if (par[0].symbol_errors != ser[0].symbol_errors) {
        std::printf("   COUNT MISMATCH between modes!\n");
        std::exit(1);
    }
    std::printf("   openmp %7.2f s   serial %7.2f s   (%llu errors, identical)\n", t_par, t_ser,
                static_cast<unsigned long long>(par[0].symbol_errors));
}

void bench_ensemble_trials() {
    std::printf("-- expurgated-ensemble BP trials (N=315, 600 codewords) per mode\n");
    SimConfig cfg;
    cfg.experiment = "ensemble";
    cfg.channel = "awgn";
    cfg.points = {0.7};
    cfg.trials = 600;
    cfg.min_errors = 1ull << 62;
    cfg.seed = 42;
    cfg.N = 315;
    cfg.m = 4;
    cfg.lambda = "x";
    cfg.rho = "x^2";
    cfg.s_g = 1;
    cfg.s_c = 8;
    cfg.hset = "hm";

    std::vector<SerRecord> par, ser;
    const double t_par = timed([&] { par = run_ensemble(cfg); });
    cfg.serial = true;
    const double t_ser = timed([&] { ser = run_ensemble(cfg); });
    if (par[0].symbol_errors != ser[0].symbol_errors) {
        std::printf("   COUNT MISMATCH between modes!\n");
        std::exit(1);
    }
    std::printf("   openmp %7.2f s   serial %7.2f s   (%llu errors, identical)\n", t_par, t_ser,
                static_cast<unsigned long long>(par[0].symbol_errors));
}

void bench_decoder_paths() {
    std::printf("-- full BP decode, fast transform vs direct reference (60 codewords)\n");
    const FieldParams f = FieldParams::make(4);
    EnsembleSpec spec;
    spec.N = 300;
    spec.m = 4;
    spec.dd = DegreeDistPair::parse("x", "x^3");  // degree-4 checks use the transform
    Rng grng(3);
    const auto g = sample_graph(spec, grng);
    const auto ch = ChannelModel::biawgn(0.9);

    auto run = [&](bool fast) {
        long long errs = 0;
        for (int t = 0; t < 60; ++t) {
            Rng rng = derive_rng(5, static_cast<std::uint64_t>(t));
            const auto blk = sample_llr_block(ch, spec.N, spec.m, rng);
            std::vector<MessageVector> init;
            for (int v = 0; v < spec.N; ++v) init.push_back(initial_message(blk.symbol(v)));
            DecoderConfig dc;
            dc.max_iter = 100;
            dc.use_fast_transform = fast;
            dc.tie_break_seed = static_cast<std::uint64_t>(t);
            Decoder dec(g, f, dc);
            const auto res = dec.decode(init);
            for (auto e : res.eventually_correct) errs += !e;
        }
        return errs;
    };
    long long e_fast = 0, e_ref = 0;
    const double t_fast = timed([&] { e_fast = run(true); });
    const double t_ref = timed([&] { e_ref = run(false); });
    std::printf("   fast %7.2f s   direct %7.2f s   speedup %.1fx   (errors %lld vs %lld)\n",
                t_fast, t_ref, t_ref / t_fast, e_fast, e_ref);
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("kernel benchmarks (%d OpenMP threads)\n", omp_get_max_threads());
#else
    std::printf("kernel benchmarks (OpenMP off)\n");
#endif
    bench_convolution();
    bench_zigzag_trials();
    bench_ensemble_trials();
    bench_decoder_paths();
    return 0;
}
