#ifndef NBLDPC_CHANNEL_HPP
#define NBLDPC_CHANNEL_HPP

#include <span>
#include <string>
#include <vector>

#include "nbldpc/message.hpp"
#include "nbldpc/rng.hpp"

namespace nbldpc {

enum class ChannelKind { BEC, BSC, BiAWGN };

/// Per-bit LLRs for a block of n_symbols field symbols, m bits each,
/// sampled under all-zero (all +1) transmission. BEC non-erasures are
/// exactly +infinity.
struct LlrBlock {
    int n_symbols = 0;
    int m = 0;
    std::vector<double> z;  // row-major, z[v*m + i]

    std::span<const double> symbol(int v) const {
        return {z.data() + static_cast<std::size_t>(v) * m, static_cast<std::size_t>(m)};
    }
};

/// Memoryless binary-input output-symmetric channel: BEC(eps), BSC(eps) or
/// binary-input AWGN with noise variance sigma2. Immutable; all members are
/// pure except sampling, which draws from the caller's stream.
class ChannelModel {
  public:
    static ChannelModel bec(double eps);
    static ChannelModel bsc(double eps);
    static ChannelModel biawgn(double sigma2);
    static ChannelModel make(ChannelKind kind, double param);

    ChannelKind kind() const { return kind_; }
    /// eps for BEC/BSC, sigma2 for BiAWGN.
    double param() const { return param_; }
    std::string name() const;

    /// One LLR draw conditioned on transmitting +1.
    double sample_llr(Rng& rng) const;

    /// Bhattacharyya functional of the L-density.
    double bhattacharyya() const;

    /// Pr(sum of k iid LLR draws <= 0), k >= 1. Ties (exact zero sums, BSC
    /// with even k) count as failure. Closed forms: BEC eps^k, BSC binomial
    /// tail, AWGN Q(sqrt(k)/sigma).
    double tail_prob(int k) const;

  private:
    ChannelModel(ChannelKind kind, double param) : kind_(kind), param_(param) {}
    ChannelKind kind_;
    double param_;
};

/// Upper Gaussian tail integral, |error| <= 1e-12 domain-wide.
double q_function(double y);

/// sigma2 from Eb/N0 in dB for unit-energy BPSK at code rate R.
double sigma2_from_ebno_db(double ebno_db, double rate);

LlrBlock sample_llr_block(const ChannelModel& ch, int n_symbols, int m, Rng& rng);

/// Initial symbol message from the m per-bit LLRs: C(x) proportional to
/// exp(-sum of Z_i over the set bits of x), normalized. A +inf LLR zeroes
/// every element with that bit set; -inf is rejected (no supported channel
/// emits it under all-zero transmission).
MessageVector initial_message(std::span<const double> llrs);

}  // namespace nbldpc

#endif
