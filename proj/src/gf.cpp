#include "nbldpc/gf.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace nbldpc {

namespace {

// Conventional primitive polynomials (bit mask includes the x^m term).
std::uint32_t default_poly(int m) {
    switch (m) {
        case 2: return 0x7;    // x^2+x+1
        case 3: return 0xB;    // x^3+x+1
        case 4: return 0x13;   // x^4+x+1
        case 5: return 0x25;   // x^5+x^2+1
        case 6: return 0x43;   // x^6+x+1
        case 7: return 0x89;   // x^7+x^3+1
        case 8: return 0x11D;  // x^8+x^4+x^3+x^2+1
        case 9: return 0x211;  // x^9+x^4+1
        case 10: return 0x409; // x^10+x^3+1
        default: throw std::invalid_argument("extension degree m must be in 2..10");
    }
}

}  // namespace

FieldParams::FieldParams(int m, std::uint32_t poly) : m_(m), q_(1 << m), poly_(poly) {
    if (m < 2 || m > 10) throw std::invalid_argument("extension degree m must be in 2..10");
    if ((poly >> m) != 1u)
        throw std::invalid_argument("prim_poly must have degree exactly m");

    log_.assign(static_cast<std::size_t>(q_), 0);
    antilog_.assign(static_cast<std::size_t>(q_ - 1), 0);

    // alpha^i by repeated multiplication with x, reducing mod poly.
    std::uint32_t sr = 1;
    for (int i = 0; i < q_ - 1; ++i) {
        if (sr == 1 && i > 0)
            throw std::invalid_argument("prim_poly is not primitive (alpha has order " +
                                        std::to_string(i) + " < q-1)");
        antilog_[static_cast<std::size_t>(i)] = static_cast<std::uint16_t>(sr);
        log_[sr] = static_cast<std::uint16_t>(i);
        sr <<= 1;
        if (sr & static_cast<std::uint32_t>(q_)) sr ^= poly;
    }
    if (sr != 1) throw std::invalid_argument("prim_poly is not primitive");
}

FieldParams FieldParams::make(int m) { return FieldParams(m, default_poly(m)); }

FieldParams FieldParams::make(int m, std::uint32_t prim_poly) { return FieldParams(m, prim_poly); }

int FieldParams::log(FieldElement a) const {
    if (a.value == 0) throw std::domain_error("discrete log of zero");
    return log_[a.value];
}

FieldElement FieldParams::inv(FieldElement a) const {
    if (a.value == 0) throw std::domain_error("inverse of zero");
    int e = (q_ - 1 - log_[a.value]) % (q_ - 1);
    return FieldElement{antilog_[static_cast<std::size_t>(e)]};
}

FieldElement FieldParams::pow(FieldElement a, long long k) const {
    if (k < 0) throw std::domain_error("pow exponent must be >= 0");
    if (a.value == 0) return k == 0 ? FieldElement{1} : FieldElement{0};
    long long e = (static_cast<long long>(log_[a.value]) * (k % (q_ - 1))) % (q_ - 1);
    return FieldElement{antilog_[static_cast<std::size_t>(e)]};
}

int FieldParams::order(FieldElement a) const {
    if (a.value == 0) throw std::domain_error("order of zero");
    return (q_ - 1) / std::gcd(q_ - 1, log_[a.value]);
}

std::vector<FieldElement> FieldParams::bad_cycle_params() const {
    const int n = q_ - 1;
    std::vector<char> in_set(static_cast<std::size_t>(n), 0);
    for (int r = 1; r < n; ++r) {
        if (n % r != 0) continue;
        const int step = n / r;
        for (int i = 0; i < r; ++i) in_set[static_cast<std::size_t>(i) * step] = 1;
    }
    std::vector<FieldElement> out;
    for (int e = 0; e < n; ++e)
        if (in_set[static_cast<std::size_t>(e)]) out.push_back(alpha_pow(e));
    return out;
}

}  // namespace nbldpc
