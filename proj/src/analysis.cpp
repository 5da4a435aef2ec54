#include "nbldpc/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nbldpc {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// Shared predicate core on a log-domain initial-message table,
// logc[k * q + x] = log C_k(x) (any common per-symbol offset cancels).
PredicateResult predicate_core(const FieldParams& params, std::span<const FieldElement> gammas,
                               const std::vector<double>& logc, double tie_tol,
                               std::vector<double>* margins) {
    const int q = params.q();
    const int s = static_cast<int>(gammas.size());
    if (s < 1) throw std::invalid_argument("predicate: empty instance");

    for (int k = 0; k < s; ++k)
        if (gammas[static_cast<std::size_t>(k)].value == 0)
            throw std::invalid_argument("predicate: zero step ratio");
    // chi_k = gamma_k * ... * gamma_s, the per-symbol orbit offset the BP
    // recursion actually produces (suffix products, matching the decoder)
    FieldElement beta{1};
    std::vector<FieldElement> chi(static_cast<std::size_t>(s));
    for (int k = s - 1; k >= 0; --k) {
        beta = params.mul(gammas[static_cast<std::size_t>(k)], beta);
        chi[static_cast<std::size_t>(k)] = beta;
    }
    const int sigma = params.order(beta);
    const int n_cosets = (q - 1) / sigma;
    if (margins) margins->assign(static_cast<std::size_t>(n_cosets), 0.0);

    double lhs = 0.0;
    for (int k = 0; k < s; ++k) lhs += logc[static_cast<std::size_t>(k) * q];
    lhs *= sigma;
    if (lhs == -kInf) return {Verdict::NoneCorrect, -kInf};

    double min_margin = kInf;
    double scale = std::max(1.0, std::abs(lhs));
    for (int j = 0; j < n_cosets; ++j) {
        double rhs = 0.0;
        FieldElement y = params.alpha_pow(j);
        for (int t = 0; t < sigma; ++t) {
            for (int k = 0; k < s; ++k)
                rhs += logc[static_cast<std::size_t>(k) * q +
                            params.mul(y, chi[static_cast<std::size_t>(k)]).value];
            y = params.mul(y, beta);
        }
        const double margin = lhs - rhs;  // rhs = -inf gives +inf margin: that coset cannot fail
        if (margins) (*margins)[static_cast<std::size_t>(j)] = margin;
        min_margin = std::min(min_margin, margin);
        if (rhs != -kInf) scale = std::max(scale, std::abs(rhs));
    }
    const Verdict v =
        min_margin > tie_tol * scale ? Verdict::AllCorrect : Verdict::NoneCorrect;
    return {v, min_margin};
}

std::vector<double> masked_llr_sums(std::span<const double> llrs) {
    const int m = static_cast<int>(llrs.size());
    const int q = 1 << m;
    std::vector<double> sums(static_cast<std::size_t>(q), 0.0);
    for (int x = 1; x < q; ++x) {
        const int low = x & -x;
        sums[static_cast<std::size_t>(x)] =
            sums[static_cast<std::size_t>(x ^ low)] + llrs[std::countr_zero(static_cast<unsigned>(low))];
    }
    return sums;
}

}  // namespace

FieldElement ZigzagInstance::beta() const {
    FieldElement b{1};
    for (auto g : gammas) b = params->mul(b, g);
    return b;
}

int ZigzagInstance::sigma_ord() const { return params->order(beta()); }

PredicateResult zigzag_success_predicate(const ZigzagInstance& z, double tie_tol,
                                   std::vector<double>* margins) {
    if (!z.params) throw std::invalid_argument("predicate: missing field");
    const int q = z.params->q();
    const int s = z.weight();
    if (static_cast<int>(z.init.size()) != s)
        throw std::invalid_argument("predicate: need one initial message per symbol");
    std::vector<double> logc(static_cast<std::size_t>(s) * q);
    for (int k = 0; k < s; ++k) {
        if (z.init[static_cast<std::size_t>(k)].q() != q)
            throw std::invalid_argument("predicate: initial message length mismatch");
        for (int x = 0; x < q; ++x)
            logc[static_cast<std::size_t>(k) * q + x] =
                std::log(z.init[static_cast<std::size_t>(k)][x]);
    }
    return predicate_core(*z.params, z.gammas, logc, tie_tol, margins);
}

PredicateResult zigzag_success_predicate_llr(const FieldParams& params,
                                       std::span<const FieldElement> gammas,
                                       std::span<const double> llrs, double tie_tol,
                                       std::vector<double>* margins) {
    const int q = params.q();
    const int m = params.m();
    const int s = static_cast<int>(gammas.size());
    if (static_cast<int>(llrs.size()) != s * m)
        throw std::invalid_argument("predicate: need s*m LLRs");
    // log C_k(x) = -sum of symbol-k LLRs over the set bits of x (up to the
    // additive constant log C_k(0) = 0, which the predicate cancels).
    std::vector<double> logc(static_cast<std::size_t>(s) * q);
    for (int k = 0; k < s; ++k) {
        const auto sums = masked_llr_sums(llrs.subspan(static_cast<std::size_t>(k) * m,
                                                       static_cast<std::size_t>(m)));
        for (int x = 0; x < q; ++x) logc[static_cast<std::size_t>(k) * q + x] = -sums[static_cast<std::size_t>(x)];
    }
    return predicate_core(params, gammas, logc, tie_tol, margins);
}

PredicateResult llr_sum_predicate(std::span<const double> llrs, double tie_tol) {
    double total = 0.0;
    double abs_total = 0.0;
    for (double z : llrs) {
        total += z;
        if (!std::isinf(z)) abs_total += std::abs(z);
    }
    if (std::isnan(total)) return {Verdict::NoneCorrect, total};  // +inf and -inf together
    const double tol = tie_tol * std::max(1.0, abs_total);
    const Verdict v = total > tol ? Verdict::AllCorrect : Verdict::NoneCorrect;
    return {v, total};
}

bool order_monotonicity_check(const ZigzagInstance& low_order, const ZigzagInstance& max_order) {
    if (low_order.weight() != max_order.weight())
        throw std::invalid_argument("order_monotonicity_check: weight mismatch");
    const auto low = zigzag_success_predicate(low_order);
    if (low.verdict != Verdict::AllCorrect) return true;  // vacuous
    return zigzag_success_predicate(max_order).verdict == Verdict::AllCorrect;
}

double p_zz(int s, int m, const ChannelModel& ch) {
    if (s < 1 || m < 1) throw std::invalid_argument("p_zz: need s, m >= 1");
    return ch.tail_prob(s * m);
}

double bsc_threshold(double mu, int m) {
    if (mu <= 1.0) return 0.5;
    return (1.0 - std::sqrt(1.0 - std::pow(mu, -2.0 / m))) / 2.0;
}

double awgn_threshold(double mu, int m) {
    if (mu <= 1.0) return kInf;
    return std::sqrt(m / (2.0 * std::log(mu)));
}

namespace {

FloorBound bound_series(const EnsembleSpec& spec, const ChannelModel& ch, int S_max,
                        bool convergent) {
    const double mu = spec.dd.mu();
    const int m = spec.m;
    FloorBound fb;
    fb.s_start = spec.s_g;
    fb.convergent = convergent;

    if (mu == 0.0) {
        fb.value = 0.0;
        fb.truncation_weight = spec.s_g - 1;
        fb.tail_estimate = 0.0;
        fb.convergent = true;
        return fb;
    }

    const double r = mu * std::pow(ch.bhattacharyya(), m);
    const double scale = 1.0 / (2.0 * spec.N);
    constexpr int kHardCap = 20000;

    double partial = 0.0;
    double mu_pow = std::pow(mu, spec.s_g);
    int s = spec.s_g;
    for (;; ++s) {
        const double term = mu_pow * ch.tail_prob(s * m);
        fb.terms.push_back(term);
        partial += term;
        mu_pow *= mu;

        if (S_max >= 0) {
            if (s >= std::max(S_max, spec.s_g)) break;
        } else if (!convergent) {
            if (s >= spec.s_g + 29) break;  // fixed preview depth, no total anyway
        } else {
            const double tail = r < 1.0 ? std::pow(r, s + 1) / (1.0 - r) : kInf;
            if (tail <= 1e-3 * partial || tail == 0.0 || s - spec.s_g + 1 >= kHardCap) break;
            if (term == 0.0 && s >= spec.s_g + 10) break;  // fp-underflowed terms
        }
    }
    fb.truncation_weight = s;
    if (convergent) {
        fb.value = scale * partial;
        fb.tail_estimate = r < 1.0 ? scale * std::pow(r, s + 1) / (1.0 - r) : kInf;
    } else {
        fb.value = std::numeric_limits<double>::quiet_NaN();
        fb.tail_estimate = kInf;
    }
    return fb;
}

}  // namespace

FloorBound floor_bound_general(const EnsembleSpec& spec, const ChannelModel& ch, int S_max) {
    const double mu = spec.dd.mu();
    const bool convergent = mu == 0.0 || mu * std::pow(ch.bhattacharyya(), spec.m) < 1.0;
    return bound_series(spec, ch, S_max, convergent);
}

FloorBound floor_bound_bsc(const EnsembleSpec& spec, double eps, int S_max) {
    const bool valid = eps < bsc_threshold(spec.dd.mu(), spec.m);
    return bound_series(spec, ChannelModel::bsc(eps), S_max, valid);
}

FloorBound floor_bound_awgn(const EnsembleSpec& spec, double sigma2, int S_max) {
    const bool valid = std::sqrt(sigma2) < awgn_threshold(spec.dd.mu(), spec.m);
    return bound_series(spec, ChannelModel::biawgn(sigma2), S_max, valid);
}

}  // namespace nbldpc
