#include "nbldpc/channel.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nbldpc {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// Exact-arithmetic binomial tail for small k, log-domain for large k where
// eps^k would underflow.
double bsc_tail(double eps, int k) {
    if (eps == 0.0) return 0.0;
    const double one_minus = 1.0 - eps;
    const int imax = k / 2;  // i counts unflipped bits; tie included
    if (k <= 40) {
        double term = std::pow(eps, k);  // i = 0
        double total = term;
        for (int i = 1; i <= imax; ++i) {
            term *= static_cast<double>(k - i + 1) / static_cast<double>(i) * (one_minus / eps);
            total += term;
        }
        return total;
    }
    double total = 0.0;
    for (int i = 0; i <= imax; ++i) {
        const double lt = std::lgamma(k + 1.0) - std::lgamma(i + 1.0) - std::lgamma(k - i + 1.0) +
                          (k - i) * std::log(eps) + i * std::log1p(-eps);
        total += std::exp(lt);
    }
    return total;
}

}  // namespace

ChannelModel ChannelModel::bec(double eps) {
    if (!(eps >= 0.0 && eps <= 1.0))
        throw std::invalid_argument("BEC erasure probability must be in [0, 1]");
    return ChannelModel(ChannelKind::BEC, eps);
}

ChannelModel ChannelModel::bsc(double eps) {
    if (!(eps >= 0.0 && eps <= 0.5))
        throw std::invalid_argument("BSC crossover probability must be in [0, 1/2]");
    return ChannelModel(ChannelKind::BSC, eps);
}

ChannelModel ChannelModel::biawgn(double sigma2) {
    if (!(sigma2 > 0.0)) throw std::invalid_argument("AWGN noise variance must be positive");
    return ChannelModel(ChannelKind::BiAWGN, sigma2);
}

ChannelModel ChannelModel::make(ChannelKind kind, double param) {
    switch (kind) {
        case ChannelKind::BEC: return bec(param);
        case ChannelKind::BSC: return bsc(param);
        case ChannelKind::BiAWGN: return biawgn(param);
    }
    throw std::invalid_argument("unknown channel kind");
}

std::string ChannelModel::name() const {
    switch (kind_) {
        case ChannelKind::BEC: return "bec";
        case ChannelKind::BSC: return "bsc";
        case ChannelKind::BiAWGN: return "awgn";
    }
    return "?";
}

double ChannelModel::sample_llr(Rng& rng) const {
    switch (kind_) {
        case ChannelKind::BEC:
            return rng.uniform() < param_ ? 0.0 : kInf;
        case ChannelKind::BSC: {
            if (param_ == 0.0) return kInf;
            const double mag = std::log((1.0 - param_) / param_);
            return rng.uniform() < param_ ? -mag : mag;
        }
        case ChannelKind::BiAWGN:
            // LLR of y ~ N(1, sigma2) is 2y/sigma2: mean 2/sigma2, var 4/sigma2.
            return 2.0 / param_ + (2.0 / std::sqrt(param_)) * rng.gaussian();
    }
    return 0.0;
}

double ChannelModel::bhattacharyya() const {
    switch (kind_) {
        case ChannelKind::BEC: return param_;
        case ChannelKind::BSC: return 2.0 * std::sqrt(param_ * (1.0 - param_));
        case ChannelKind::BiAWGN: return std::exp(-1.0 / (2.0 * param_));
    }
    return 0.0;
}

double ChannelModel::tail_prob(int k) const {
    if (k < 1) throw std::invalid_argument("tail_prob needs k >= 1");
    switch (kind_) {
        case ChannelKind::BEC: return std::pow(param_, k);
        case ChannelKind::BSC: return bsc_tail(param_, k);
        case ChannelKind::BiAWGN: return q_function(std::sqrt(static_cast<double>(k) / param_));
    }
    return 0.0;
}

double q_function(double y) { return 0.5 * std::erfc(y / std::sqrt(2.0)); }

double sigma2_from_ebno_db(double ebno_db, double rate) {
    if (!(rate > 0.0)) throw std::invalid_argument("rate must be positive");
    return 1.0 / (2.0 * rate * std::pow(10.0, ebno_db / 10.0));
}

LlrBlock sample_llr_block(const ChannelModel& ch, int n_symbols, int m, Rng& rng) {
    if (n_symbols < 1) throw std::invalid_argument("n_symbols must be >= 1");
    LlrBlock blk;
    blk.n_symbols = n_symbols;
    blk.m = m;
    blk.z.resize(static_cast<std::size_t>(n_symbols) * m);
    for (auto& v : blk.z) v = ch.sample_llr(rng);
    return blk;
}

MessageVector initial_message(std::span<const double> llrs) {
    const int m = static_cast<int>(llrs.size());
    const int q = 1 << m;
    for (double z : llrs)
        if (std::isinf(z) && z < 0.0)
            throw std::domain_error("initial_message: -inf LLR has no valid symbol likelihood");

    // masked_sum[x] = sum of llrs over the set bits of x, built by lowbit DP.
    std::vector<double> masked_sum(static_cast<std::size_t>(q), 0.0);
    for (int x = 1; x < q; ++x) {
        const int low = x & -x;
        const int bit = std::countr_zero(static_cast<unsigned>(low));
        masked_sum[x] = masked_sum[x ^ low] + llrs[bit];
    }

    double lo = 0.0;  // masked_sum[0] == 0, so the minimum is <= 0
    for (double s : masked_sum)
        if (s < lo) lo = s;

    MessageVector msg(q);
    for (int x = 0; x < q; ++x) {
        const double s = masked_sum[x];
        msg[x] = std::isinf(s) ? 0.0 : std::exp(-(s - lo));
    }
    msg.normalize();
    return msg;
}

}  // namespace nbldpc
