#ifndef NBLDPC_MESSAGE_HPP
#define NBLDPC_MESSAGE_HPP

#include <span>
#include <vector>

namespace nbldpc {

/// Length-q nonnegative vector indexed by field-element value. BP messages
/// and initial messages are kept normalized to sum 1.
struct MessageVector {
    std::vector<double> p;

    MessageVector() = default;
    explicit MessageVector(int q) : p(static_cast<std::size_t>(q), 0.0) {}

    int q() const { return static_cast<int>(p.size()); }
    double& operator[](int x) { return p[static_cast<std::size_t>(x)]; }
    double operator[](int x) const { return p[static_cast<std::size_t>(x)]; }

    static MessageVector uniform(int q) {
        MessageVector v(q);
        for (auto& e : v.p) e = 1.0 / q;
        return v;
    }

    static MessageVector point_mass(int q, int x) {
        MessageVector v(q);
        v[x] = 1.0;
        return v;
    }

    /// Scales to sum 1. Throws std::domain_error if the sum is not positive.
    void normalize();

    double sum() const;
};

/// In-place Walsh-Hadamard transform over the XOR group; length must be a
/// power of two. Unnormalized (apply twice = multiply by length).
void wht_inplace(std::span<double> data);

/// Convolution over the XOR group via the transform, O(q log q).
MessageVector xor_convolve(const MessageVector& a, const MessageVector& b);

/// Direct O(q^2) double sum; reference implementation for the transform
/// path, kept for tests and the benchmark.
MessageVector xor_convolve_direct(const MessageVector& a, const MessageVector& b);

}  // namespace nbldpc

#endif
