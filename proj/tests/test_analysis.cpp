#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "nbldpc/analysis.hpp"
#include "nbldpc/channel.hpp"
#include "nbldpc/rng.hpp"

using namespace nbldpc;

namespace {

ZigzagInstance random_instance(const FieldParams& f, int s, const ChannelModel& ch, Rng& rng) {
    ZigzagInstance z;
    z.params = &f;
    for (int i = 0; i < s; ++i)
        z.gammas.push_back(
            FieldElement{static_cast<std::uint16_t>(1 + rng.below(static_cast<std::uint64_t>(f.q() - 1)))});
    const auto blk = sample_llr_block(ch, s, f.m(), rng);
    for (int v = 0; v < s; ++v) z.init.push_back(initial_message(blk.symbol(v)));
    return z;
}

}  // namespace

TEST_CASE("zigzag success predicate basics") {
    const FieldParams f = FieldParams::make(4);
    ZigzagInstance z;
    z.params = &f;
    z.gammas = {f.alpha(), FieldElement{1}, FieldElement{1}};

    SUBCASE("noiseless point masses decode") {
        z.init.assign(3, MessageVector::point_mass(16, 0));
        CHECK(zigzag_success_predicate(z).verdict == Verdict::AllCorrect);
    }
    SUBCASE("all-uniform init is the equality case and fails") {
        z.init.assign(3, MessageVector::uniform(16));
        const auto pr = zigzag_success_predicate(z);
        CHECK(pr.verdict == Verdict::NoneCorrect);
        CHECK(std::abs(pr.margin) < 1e-9);
    }
    SUBCASE("a zero at C_k(0) fails immediately") {
        z.init.assign(3, MessageVector::uniform(16));
        z.init[1] = MessageVector::point_mass(16, 3);
        const auto pr = zigzag_success_predicate(z);
        CHECK(pr.verdict == Verdict::NoneCorrect);
        CHECK(pr.margin == -std::numeric_limits<double>::infinity());
    }
    SUBCASE("beta and sigma_ord") {
        CHECK(z.beta() == f.alpha());
        CHECK(z.sigma_ord() == 15);
    }
}

TEST_CASE("LLR-sum shortcut equals the full predicate for max-order cycle parameters") {
    for (int m : {2, 3, 4}) {
        const FieldParams f = FieldParams::make(m);
        for (const auto& ch : {ChannelModel::biawgn(1.0), ChannelModel::bsc(0.1)}) {
            int disagreements = 0;
            for (int t = 0; t < 2500; ++t) {
                Rng rng = derive_rng(42, static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(t),
                                     ch.kind() == ChannelKind::BSC);
                const int s = 1 + static_cast<int>(rng.below(4));
                // force a max-order parameter through the first step ratio
                std::vector<FieldElement> gammas(static_cast<std::size_t>(s), FieldElement{1});
                int e;
                do {
                    e = static_cast<int>(rng.below(static_cast<std::uint64_t>(f.q() - 1)));
                } while (!f.is_max_order(f.alpha_pow(e)));
                gammas[0] = f.alpha_pow(e);

                const auto blk = sample_llr_block(ch, s, m, rng);
                const auto t1 = zigzag_success_predicate_llr(f, gammas, blk.z);
                const auto c2 = llr_sum_predicate(blk.z);
                disagreements += t1.verdict != c2.verdict;
            }
            CHECK(disagreements == 0);
        }
    }
}

TEST_CASE("LLR-sum predicate examples") {
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(llr_sum_predicate(std::vector<double>{inf, inf}).verdict == Verdict::AllCorrect);
    // half the bits flipped on a BSC: exact tie, must fail
    const double L = std::log(19.0);
    CHECK(llr_sum_predicate(std::vector<double>{L, -L, L, -L}).verdict ==
          Verdict::NoneCorrect);
    CHECK(llr_sum_predicate(std::vector<double>{0.5, -0.2}).verdict == Verdict::AllCorrect);
    CHECK(llr_sum_predicate(std::vector<double>{-0.5, 0.2}).verdict == Verdict::NoneCorrect);
}

TEST_CASE("success is monotone in cycle-parameter order over 10^4 paired draws") {
    const FieldParams f = FieldParams::make(4);
    const auto ch = ChannelModel::biawgn(1.3);
    int tested = 0;
    for (int t = 0; t < 10000; ++t) {
        Rng rng = derive_rng(17, static_cast<std::uint64_t>(t));
        const int s = 1 + static_cast<int>(rng.below(3));
        ZigzagInstance low, high;
        low.params = high.params = &f;
        const auto blk = sample_llr_block(ch, s, 4, rng);
        for (int v = 0; v < s; ++v) {
            const auto msg = initial_message(blk.symbol(v));
            low.init.push_back(msg);
            high.init.push_back(msg);
        }
        low.gammas.assign(static_cast<std::size_t>(s), FieldElement{1});
        high.gammas.assign(static_cast<std::size_t>(s), FieldElement{1});
        low.gammas[0] = f.alpha_pow(3);   // order 5
        high.gammas[0] = f.alpha_pow(1);  // order 15
        CHECK(order_monotonicity_check(low, high));
        ++tested;
    }
    CHECK(tested == 10000);

    SUBCASE("same order on both sides is trivially true") {
        ZigzagInstance a, b;
        a.params = b.params = &f;
        a.gammas = b.gammas = {f.alpha()};
        a.init = b.init = {MessageVector::uniform(16)};
        CHECK(order_monotonicity_check(a, b));
    }
}

TEST_CASE("aggregate product of the per-coset inequalities") {
    // multiplying the success inequality over all coset representatives
    // collapses to (q-1) * sum_k log C_k(0) vs sum over all nonzero x
    const FieldParams f = FieldParams::make(4);
    Rng rng(5151);
    for (int t = 0; t < 300; ++t) {
        const auto z = random_instance(f, 1 + static_cast<int>(rng.below(4)),
                                       ChannelModel::biawgn(1.0), rng);
        std::vector<double> margins;
        (void)zigzag_success_predicate(z, 1e-12, &margins);

        double lhs_total = 0.0, rhs_total = 0.0;
        for (int k = 0; k < z.weight(); ++k) {
            lhs_total += (f.q() - 1) * std::log(z.init[static_cast<std::size_t>(k)][0]);
            for (int x = 1; x < f.q(); ++x)
                rhs_total += std::log(z.init[static_cast<std::size_t>(k)][x]);
        }
        double margin_total = 0.0;
        for (double mg : margins) margin_total += mg;
        const double scale = std::max({1.0, std::abs(lhs_total), std::abs(rhs_total)});
        CHECK(std::abs(margin_total - (lhs_total - rhs_total)) <= 1e-9 * scale);
    }
}

TEST_CASE("p_zz closed forms") {
    CHECK(p_zz(3, 4, ChannelModel::biawgn(1.0)) ==
          doctest::Approx(q_function(std::sqrt(12.0))).epsilon(1e-13));
    CHECK(p_zz(2, 3, ChannelModel::bec(0.3)) == doctest::Approx(std::pow(0.3, 6)).epsilon(1e-12));
    // monotone vanishing tail in s*m
    double prev = 1.0;
    for (int s = 1; s <= 8; ++s) {
        const double v = p_zz(s, 4, ChannelModel::biawgn(0.8));
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("bound validity thresholds") {
    // direct evaluation of the closed forms
    CHECK(bsc_threshold(2.0, 4) ==
          doctest::Approx((1.0 - std::sqrt(1.0 - std::pow(2.0, -0.5))) / 2.0).epsilon(1e-15));
    CHECK(bsc_threshold(2.0, 4) == doctest::Approx(0.2294019499).epsilon(1e-8));
    CHECK(bsc_threshold(0.5, 4) == 0.5);
    CHECK(awgn_threshold(2.0, 4) == doctest::Approx(std::sqrt(4.0 / (2.0 * std::log(2.0)))).epsilon(1e-15));
    CHECK(awgn_threshold(2.0, 4) == doctest::Approx(1.6986).epsilon(1e-4));
    CHECK(awgn_threshold(1.0, 4) == std::numeric_limits<double>::infinity());
    CHECK(awgn_threshold(0.3, 6) == std::numeric_limits<double>::infinity());
}

TEST_CASE("floor bound series") {
    EnsembleSpec spec;
    spec.N = 315;
    spec.m = 4;
    spec.dd = DegreeDistPair::parse("x", "x^2");
    spec.s_g = 1;
    spec.s_c = 8;

    SUBCASE("convergence flag matches mu B^m < 1") {
        const auto fb = floor_bound_awgn(spec, 1.0, -1);
        CHECK(fb.convergent);  // r = 2 e^-2 ~ 0.27
        const auto fb2 = floor_bound_awgn(spec, 4.0, -1);  // sigma = 2 > sigma*_4
        CHECK_FALSE(fb2.convergent);
        CHECK(std::isnan(fb2.value));
        CHECK_FALSE(fb2.terms.empty());
    }

    SUBCASE("terms are mu^s tail(s m) and value is their scaled sum") {
        const auto fb = floor_bound_awgn(spec, 1.0, 6);
        REQUIRE(fb.terms.size() == 6);
        double total = 0.0;
        for (int s = 1; s <= 6; ++s) {
            const double want = std::pow(2.0, s) * q_function(std::sqrt(4.0 * s));
            CHECK(fb.terms[static_cast<std::size_t>(s - 1)] ==
                  doctest::Approx(want).epsilon(1e-12));
            total += want;
        }
        CHECK(fb.value == doctest::Approx(total / (2.0 * 315)).epsilon(1e-12));
        CHECK(fb.s_start == 1);
    }

    SUBCASE("auto truncation certifies the tail") {
        const auto fb = floor_bound_awgn(spec, 1.0, -1);
        CHECK(fb.tail_estimate <= 1e-3 * fb.value * (2.0 * 315) + 1e-300);
        // extending the series adds no more than the certificate
        const auto longer = floor_bound_awgn(spec, 1.0, fb.truncation_weight + 20);
        CHECK(longer.value - fb.value <= fb.tail_estimate * 1.0000001);
        CHECK(longer.value >= fb.value);
    }

    SUBCASE("series starts at s_g") {
        spec.s_g = 3;
        spec.s_c = 5;
        const auto fb = floor_bound_awgn(spec, 1.0, 5);
        CHECK(fb.s_start == 3);
        CHECK(fb.terms.size() == 3);
        CHECK(fb.terms[0] ==
              doctest::Approx(8.0 * q_function(std::sqrt(12.0))).epsilon(1e-12));
    }

    SUBCASE("mu = 0 gives a zero bound") {
        spec.dd = DegreeDistPair::parse("x^2", "x^2");
        const auto fb = floor_bound_general(spec, ChannelModel::biawgn(1.0), -1);
        CHECK(fb.value == 0.0);
        CHECK(fb.convergent);
    }

    SUBCASE("BSC bound: zero noise and single-term example") {
        spec.dd = DegreeDistPair::parse("x", "x^2");
        spec.s_g = 1;
        const auto fb0 = floor_bound_bsc(spec, 0.0, 4);
        CHECK(fb0.value == 0.0);

        // one term, m=2 field: mu * tail(2) with tail(2) = eps^2 + 2 eps(1-eps)
        EnsembleSpec spec2 = spec;
        spec2.m = 2;
        spec2.N = 100;
        const auto fb1 = floor_bound_bsc(spec2, 0.1, 1);
        REQUIRE(fb1.terms.size() == 1);
        CHECK(fb1.terms[0] == doctest::Approx(2.0 * 0.19).epsilon(1e-12));
        CHECK(fb1.value == doctest::Approx(2.0 * 0.19 / 200.0).epsilon(1e-12));
    }

    SUBCASE("BSC validity threshold flags non-convergence") {
        const auto fb = floor_bound_bsc(spec, 0.3, -1);  // 0.3 > eps*_4 ~ 0.2294
        CHECK_FALSE(fb.convergent);
    }

    SUBCASE("general route equals the channel-specific corollaries") {
        const auto ga = floor_bound_general(spec, ChannelModel::biawgn(0.9), 8);
        const auto ca = floor_bound_awgn(spec, 0.9, 8);
        CHECK(ga.value == doctest::Approx(ca.value).epsilon(1e-14));
        const auto gb = floor_bound_general(spec, ChannelModel::bsc(0.05), 8);
        const auto cb = floor_bound_bsc(spec, 0.05, 8);
        CHECK(gb.value == doctest::Approx(cb.value).epsilon(1e-14));
    }
}

TEST_CASE("predicate rejects malformed instances") {
    const FieldParams f = FieldParams::make(3);
    ZigzagInstance z;
    z.params = &f;
    z.gammas = {f.alpha()};
    CHECK_THROWS_AS((void)zigzag_success_predicate(z), std::invalid_argument);  // missing init
    CHECK_THROWS_AS((void)zigzag_success_predicate_llr(f, z.gammas, std::vector<double>{1.0}),
                    std::invalid_argument);  // wrong LLR count
}
