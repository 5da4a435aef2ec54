#ifndef NBLDPC_GF_HPP
#define NBLDPC_GF_HPP

#include <cstdint>
#include <vector>

namespace nbldpc {

/// Element of GF(2^m) in bit representation: the value's bit i is the
/// coefficient of alpha^i in the polynomial basis. value 0 is the zero
/// element; addition is XOR.
struct FieldElement {
    std::uint16_t value = 0;
    friend bool operator==(FieldElement, FieldElement) = default;
    friend auto operator<=>(FieldElement, FieldElement) = default;
};

inline FieldElement add(FieldElement a, FieldElement b) {
    return FieldElement{static_cast<std::uint16_t>(a.value ^ b.value)};
}

/// GF(2^m) arithmetic tables, 2 <= m <= 10. alpha = x is a primitive root
/// of the generating polynomial; multiplication goes through log/antilog
/// tables so the decoder hot loop never reduces polynomials.
///
/// The exponent sets computed here (e.g. bad_cycle_params) are invariant
/// under the choice of primitive polynomial, so the defaults only matter
/// for reproducibility of raw element values.
class FieldParams {
  public:
    static FieldParams make(int m);
    static FieldParams make(int m, std::uint32_t prim_poly);

    int m() const { return m_; }
    int q() const { return q_; }
    std::uint32_t prim_poly() const { return poly_; }

    FieldElement alpha() const { return FieldElement{2}; }

    /// alpha^k for any integer k (reduced mod q-1).
    FieldElement alpha_pow(long long k) const {
        long long r = k % (q_ - 1);
        if (r < 0) r += q_ - 1;
        return FieldElement{antilog_[static_cast<std::size_t>(r)]};
    }

    /// Discrete log base alpha; domain error on zero.
    int log(FieldElement a) const;

    FieldElement mul(FieldElement a, FieldElement b) const {
        if (a.value == 0 || b.value == 0) return FieldElement{0};
        int e = log_[a.value] + log_[b.value];
        if (e >= q_ - 1) e -= q_ - 1;
        return FieldElement{antilog_[static_cast<std::size_t>(e)]};
    }

    FieldElement inv(FieldElement a) const;
    FieldElement pow(FieldElement a, long long k) const;

    /// Multiplicative order: smallest k >= 1 with a^k = 1. Divides q-1.
    int order(FieldElement a) const;

    bool is_max_order(FieldElement a) const { return order(a) == q_ - 1; }

    /// The set of nonzero elements whose order is below q-1, built as the
    /// union of all proper multiplicative subgroups (i.e. for every proper
    /// divisor r of q-1, the elements alpha^{i(q-1)/r}). Cycle parameters
    /// in this set degrade zigzag-cycle decoding. Returned sorted by
    /// exponent.
    std::vector<FieldElement> bad_cycle_params() const;

    const std::vector<std::uint16_t>& log_table() const { return log_; }
    const std::vector<std::uint16_t>& antilog_table() const { return antilog_; }

  private:
    FieldParams(int m, std::uint32_t poly);

    int m_ = 0;
    int q_ = 0;
    std::uint32_t poly_ = 0;
    std::vector<std::uint16_t> log_;      // value -> exponent, log_[0] unused
    std::vector<std::uint16_t> antilog_;  // exponent -> value, size q-1
};

}  // namespace nbldpc

#endif
