#include "nbldpc/message.hpp"

#include <stdexcept>

namespace nbldpc {

double MessageVector::sum() const {
    double s = 0.0;
    for (double e : p) s += e;
    return s;
}

void MessageVector::normalize() {
    const double s = sum();
    if (!(s > 0.0)) throw std::domain_error("cannot normalize message with nonpositive mass");
    for (auto& e : p) e /= s;
}

void wht_inplace(std::span<double> data) {
    const std::size_t n = data.size();
    for (std::size_t len = 1; len < n; len <<= 1) {
        for (std::size_t i = 0; i < n; i += len << 1) {
            for (std::size_t j = i; j < i + len; ++j) {
                const double u = data[j];
                const double v = data[j + len];
                data[j] = u + v;
                data[j + len] = u - v;
            }
        }
    }
}

MessageVector xor_convolve(const MessageVector& a, const MessageVector& b) {
    if (a.q() != b.q()) throw std::invalid_argument("convolution operands differ in length");
    MessageVector ta = a, tb = b;
    wht_inplace(ta.p);
    wht_inplace(tb.p);
    for (int x = 0; x < ta.q(); ++x) ta[x] *= tb[x];
    wht_inplace(ta.p);
    const double scale = 1.0 / ta.q();
    for (auto& e : ta.p) e *= scale;
    return ta;
}

MessageVector xor_convolve_direct(const MessageVector& a, const MessageVector& b) {
    if (a.q() != b.q()) throw std::invalid_argument("convolution operands differ in length");
    const int q = a.q();
    MessageVector out(q);
    for (int y = 0; y < q; ++y) {
        if (a[y] == 0.0) continue;
        for (int z = 0; z < q; ++z) out[y ^ z] += a[y] * b[z];
    }
    return out;
}

}  // namespace nbldpc
