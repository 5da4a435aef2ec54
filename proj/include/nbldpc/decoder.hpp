#ifndef NBLDPC_DECODER_HPP
#define NBLDPC_DECODER_HPP

#include <cstdint>
#include <vector>

#include "nbldpc/gf.hpp"
#include "nbldpc/graph.hpp"
#include "nbldpc/message.hpp"
#include "nbldpc/rng.hpp"

namespace nbldpc {

/// Component-wise product of the initial message and all incoming check
/// messages except incoming[exclude_index] (pass -1 to keep all),
/// normalized. Total mass loss resets to uniform and sets *extinct.
MessageVector variable_update(const MessageVector& c, const std::vector<MessageVector>& incoming,
                              int exclude_index, double norm_floor = 1e-300,
                              bool* extinct = nullptr);

/// Check-node action: permute each incoming message by its label inverse,
/// convolve over the XOR group, re-index by the outgoing label. incoming
/// already excludes the target edge.
MessageVector check_update(const FieldParams& params,
                           const std::vector<std::pair<MessageVector, FieldElement>>& incoming,
                           FieldElement out_label, bool fast = true, double norm_floor = 1e-300);

/// Hard decision with uniform random tie-break; returns (choice, tie size).
std::pair<FieldElement, int> decide_symbol(const MessageVector& c,
                                           const std::vector<MessageVector>& incoming,
                                           double tie_rel, Rng& tie_rng);

struct DecoderConfig {
    int max_iter = 200;
    /// Trailing iterations that must all decide 0 with a unique argmax for a
    /// symbol to count as eventually correct (finite surrogate for the
    /// limit definition).
    int ec_window = 8;
    std::uint64_t tie_break_seed = 0;
    /// Messages are max-normalized, clamped below this floor, then
    /// renormalized; keeps long products out of denormal collapse without
    /// moving the argmax.
    double norm_floor = 1e-300;
    /// Entries within this relative band of the maximum count as tied.
    /// Theoretically tied decisions (balanced BSC draws) must be detected
    /// as ties despite floating-point noise.
    double tie_rel = 1e-9;
    /// false selects the direct O(q^2) check-node convolution (reference
    /// path, same contract).
    bool use_fast_transform = true;
    bool record_trace = false;
};

struct DecodeResult {
    std::vector<FieldElement> decisions;       // final hard decision per symbol
    std::vector<std::uint8_t> eventually_correct;
    int iterations_run = 0;
    bool syndrome_ok = false;   // final decisions satisfy all checks (reported, never used to stop)
    bool had_extinction = false;  // some message lost all mass and was reset to uniform
    /// Decision trace (iteration-major) when record_trace is set.
    std::vector<std::vector<FieldElement>> trace;
};

/// Flooding-schedule belief propagation over GF(2^m) in the probability
/// domain: component-wise variable updates, label-permuted XOR convolutions
/// at the checks, random uniform tie-break at the decision. Owns copies of
/// the graph and field; decode() may be called repeatedly with fresh inputs.
class Decoder {
  public:
    Decoder(TannerGraph g, FieldParams params, DecoderConfig cfg);

    DecodeResult decode(const std::vector<MessageVector>& init);

    const DecoderConfig& config() const { return cfg_; }

  private:
    void normalize_message(double* msg);
    void variable_pass();
    void check_pass();
    void decide_pass(int iter, DecodeResult& result, Rng& tie_rng,
                     std::vector<int>& zero_run);

    TannerGraph g_;
    FieldParams params_;
    DecoderConfig cfg_;
    int q_;

    const std::vector<MessageVector>* init_ = nullptr;
    std::vector<double> psi_;  // variable-to-check, edge-major [edge * q_]
    std::vector<double> phi_;  // check-to-variable
    std::vector<double> scratch_;
    std::vector<double> prefix_, suffix_;
    std::vector<std::uint16_t> perm_in_;   // per edge: x -> h^{-1} x table offset
    std::vector<std::uint16_t> perm_out_;  // per edge: x -> h x
    bool extinction_ = false;
};

}  // namespace nbldpc

#endif
