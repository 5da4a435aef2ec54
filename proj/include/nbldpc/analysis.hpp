#ifndef NBLDPC_ANALYSIS_HPP
#define NBLDPC_ANALYSIS_HPP

#include <span>
#include <vector>

#include "nbldpc/channel.hpp"
#include "nbldpc/gf.hpp"
#include "nbldpc/graph.hpp"
#include "nbldpc/message.hpp"

namespace nbldpc {

enum class Verdict { AllCorrect, NoneCorrect };

/// margin is the log-domain gap min over cosets of (success left side minus
/// right side); nonpositive or tied-within-tolerance margins give
/// NoneCorrect. The all-or-none structure is exact for zigzag cycle codes.
struct PredicateResult {
    Verdict verdict = Verdict::NoneCorrect;
    double margin = 0.0;
};

/// One zigzag-cycle-code instance: step ratios gamma_1..gamma_s (the cycle
/// parameter is their product) plus the per-symbol initial messages.
struct ZigzagInstance {
    const FieldParams* params = nullptr;
    std::vector<FieldElement> gammas;
    std::vector<MessageVector> init;

    int weight() const { return static_cast<int>(gammas.size()); }
    FieldElement beta() const;
    int sigma_ord() const;  // multiplicative order of beta
};

/// Exact success predicate for a zigzag cycle code under BP in the
/// large-iteration limit: success iff for every coset representative x,
/// sigma * sum_k log C_k(0) exceeds sum over the beta-orbit of x of the
/// log initial-message values. Ties within tie_tol (relative, log domain)
/// resolve to NoneCorrect. Optional margins receives one log-gap per coset.
PredicateResult zigzag_success_predicate(const ZigzagInstance& z, double tie_tol = 1e-12,
                                   std::vector<double>* margins = nullptr);

/// Same predicate evaluated from raw per-bit LLRs (s*m values, symbol-major)
/// without building message vectors; the hot path for predicate-engine
/// sweeps.
PredicateResult zigzag_success_predicate_llr(const FieldParams& params,
                                       std::span<const FieldElement> gammas,
                                       std::span<const double> llrs, double tie_tol = 1e-12,
                                       std::vector<double>* margins = nullptr);

/// Max-order specialization: success iff the plain LLR sum is positive.
/// Only valid when the cycle parameter has order 2^m - 1.
PredicateResult llr_sum_predicate(std::span<const double> llrs, double tie_tol = 1e-12);

/// Monotonicity in the cycle-parameter order: on the same channel output,
/// success of a non-max-order instance implies success of a max-order one.
/// Returns whether the implication holds (property-test helper; must always
/// be true).
bool order_monotonicity_check(const ZigzagInstance& low_order, const ZigzagInstance& max_order);

/// Symbol error rate of the max-order zigzag cycle code of weight s over
/// GF(2^m): Pr(sum of s*m iid LLRs <= 0).
double p_zz(int s, int m, const ChannelModel& ch);

/// Truncated error-floor lower-bound series (1/2N) sum_{s >= s_g} mu^s
/// Pr(Z^(sm) <= 0) with a geometric tail certificate.
struct FloorBound {
    double value = 0.0;          // NaN when the series is not convergent
    std::vector<double> terms;   // mu^s * Pr(Z^(sm) <= 0) for s = s_start..truncation_weight
    int s_start = 1;
    int truncation_weight = 0;
    double tail_estimate = 0.0;  // upper bound on the omitted (1/2N)-scaled tail
    bool convergent = false;
};

/// Series converges iff mu * B(a)^m < 1 with B the Bhattacharyya value.
/// S_max < 0 auto-truncates once the tail certificate drops below 1e-3 of
/// the partial sum.
FloorBound floor_bound_general(const EnsembleSpec& spec, const ChannelModel& ch, int S_max = -1);

/// BSC closed form: valid (= convergent) for eps below bsc_threshold.
FloorBound floor_bound_bsc(const EnsembleSpec& spec, double eps, int S_max = -1);

/// AWGN closed form: valid for noise std sigma below awgn_threshold.
FloorBound floor_bound_awgn(const EnsembleSpec& spec, double sigma2, int S_max = -1);

/// eps*_m = 1/2 for mu <= 1, else (1 - sqrt(1 - mu^{-2/m})) / 2.
double bsc_threshold(double mu, int m);

/// sigma*_m = +inf for mu <= 1, else sqrt(m / (2 ln mu)).
double awgn_threshold(double mu, int m);

}  // namespace nbldpc

#endif
