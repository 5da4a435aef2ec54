#include "nbldpc/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nbldpc {

// ------------------------------------------------------ contract-level ops

namespace {

void pipeline_normalize(double* msg, int q, double floor, bool* extinct) {
    double mx = 0.0;
    for (int x = 0; x < q; ++x) {
        if (msg[x] < 0.0) msg[x] = 0.0;  // transform round-off
        if (msg[x] > mx) mx = msg[x];
    }
    if (!(mx > 0.0)) {
        for (int x = 0; x < q; ++x) msg[x] = 1.0 / q;
        if (extinct) *extinct = true;
        return;
    }
    double sum = 0.0;
    for (int x = 0; x < q; ++x) {
        msg[x] /= mx;
        if (msg[x] < floor) msg[x] = floor;
        sum += msg[x];
    }
    for (int x = 0; x < q; ++x) msg[x] /= sum;
}

}  // namespace

MessageVector variable_update(const MessageVector& c, const std::vector<MessageVector>& incoming,
                              int exclude_index, double norm_floor, bool* extinct) {
    const int q = c.q();
    MessageVector out = c;
    for (int k = 0; k < static_cast<int>(incoming.size()); ++k) {
        if (k == exclude_index) continue;
        if (incoming[static_cast<std::size_t>(k)].q() != q)
            throw std::invalid_argument("variable_update: message length mismatch");
        double mx = 0.0;
        for (int x = 0; x < q; ++x) {
            out[x] *= incoming[static_cast<std::size_t>(k)][x];
            if (out[x] > mx) mx = out[x];
        }
        if (mx > 0.0)
            for (int x = 0; x < q; ++x) out[x] /= mx;
    }
    pipeline_normalize(out.p.data(), q, norm_floor, extinct);
    return out;
}

MessageVector check_update(const FieldParams& params,
                           const std::vector<std::pair<MessageVector, FieldElement>>& incoming,
                           FieldElement out_label, bool fast, double norm_floor) {
    if (out_label.value == 0) throw std::invalid_argument("check_update: zero label");
    const int q = params.q();
    MessageVector conv = MessageVector::point_mass(q, 0);  // identity of XOR convolution
    for (const auto& [msg, label] : incoming) {
        if (label.value == 0) throw std::invalid_argument("check_update: zero label");
        if (msg.q() != q) throw std::invalid_argument("check_update: message length mismatch");
        MessageVector permuted(q);
        const FieldElement hinv = params.inv(label);
        for (int x = 0; x < q; ++x) permuted[x] = msg[params.mul(hinv, FieldElement{static_cast<std::uint16_t>(x)}).value];
        conv = fast ? xor_convolve(conv, permuted) : xor_convolve_direct(conv, permuted);
    }
    MessageVector out(q);
    for (int x = 0; x < q; ++x)
        out[x] = conv[params.mul(out_label, FieldElement{static_cast<std::uint16_t>(x)}).value];
    pipeline_normalize(out.p.data(), q, norm_floor, nullptr);
    return out;
}

std::pair<FieldElement, int> decide_symbol(const MessageVector& c,
                                           const std::vector<MessageVector>& incoming,
                                           double tie_rel, Rng& tie_rng) {
    const int q = c.q();
    MessageVector d = c;
    for (const auto& phi : incoming) {
        double mx = 0.0;
        for (int x = 0; x < q; ++x) {
            d[x] *= phi[x];
            if (d[x] > mx) mx = d[x];
        }
        if (mx > 0.0)
            for (int x = 0; x < q; ++x) d[x] /= mx;
    }
    double mx = 0.0;
    for (int x = 0; x < q; ++x) mx = std::max(mx, d[x]);
    std::vector<int> tied;
    if (mx > 0.0) {
        const double cut = mx * (1.0 - tie_rel);
        for (int x = 0; x < q; ++x)
            if (d[x] >= cut) tied.push_back(x);
    } else {
        for (int x = 0; x < q; ++x) tied.push_back(x);
    }
    const int pick = tied.size() == 1
                         ? tied[0]
                         : tied[static_cast<std::size_t>(tie_rng.below(tied.size()))];
    return {FieldElement{static_cast<std::uint16_t>(pick)}, static_cast<int>(tied.size())};
}

// ----------------------------------------------------------------- decoder

Decoder::Decoder(TannerGraph g, FieldParams params, DecoderConfig cfg)
    : g_(std::move(g)), params_(std::move(params)), cfg_(cfg), q_(params_.q()) {
    if (g_.q != q_) throw std::invalid_argument("decoder: graph field size mismatch");
    if (cfg.max_iter < 1) throw std::invalid_argument("decoder: max_iter must be >= 1");
    if (cfg.ec_window < 1 || cfg.ec_window > cfg.max_iter)
        throw std::invalid_argument("decoder: need 1 <= ec_window <= max_iter");
    g_.check_consistency();

    const std::size_t nE = g_.edges.size();
    psi_.assign(nE * q_, 0.0);
    phi_.assign(nE * q_, 0.0);

    perm_in_.resize(nE * q_);
    perm_out_.resize(nE * q_);
    for (std::size_t e = 0; e < nE; ++e) {
        const FieldElement h = g_.edges[e].label;
        const FieldElement hinv = params_.inv(h);
        for (int x = 0; x < q_; ++x) {
            perm_in_[e * q_ + x] = params_.mul(hinv, FieldElement{static_cast<std::uint16_t>(x)}).value;
            perm_out_[e * q_ + x] = params_.mul(h, FieldElement{static_cast<std::uint16_t>(x)}).value;
        }
    }

    std::size_t max_deg = 1;
    for (const auto& es : g_.check_edges) max_deg = std::max(max_deg, es.size());
    for (const auto& es : g_.var_edges) max_deg = std::max(max_deg, es.size());
    scratch_.assign((max_deg + 2) * q_, 0.0);
    prefix_.assign((max_deg + 1) * q_, 0.0);
    suffix_.assign((max_deg + 1) * q_, 0.0);
}

void Decoder::normalize_message(double* msg) { pipeline_normalize(msg, q_, cfg_.norm_floor, &extinction_); }

void Decoder::variable_pass() {
    const auto& init = *init_;
    for (int v = 0; v < g_.n_var; ++v) {
        const auto& es = g_.var_edges[static_cast<std::size_t>(v)];
        const int d = static_cast<int>(es.size());
        const double* c = init[static_cast<std::size_t>(v)].p.data();

        // prefix_[k] = C * phi_0..phi_{k-1}, suffix_[k] = phi_k..phi_{d-1};
        // each stage max-normalized so long products stay in range.
        std::copy(c, c + q_, &prefix_[0]);
        for (int k = 0; k < d; ++k) {
            const double* ph = &phi_[static_cast<std::size_t>(es[static_cast<std::size_t>(k)]) * q_];
            double mx = 0.0;
            for (int x = 0; x < q_; ++x) {
                prefix_[(k + 1) * static_cast<std::size_t>(q_) + x] =
                    prefix_[k * static_cast<std::size_t>(q_) + x] * ph[x];
                mx = std::max(mx, prefix_[(k + 1) * static_cast<std::size_t>(q_) + x]);
            }
            if (mx > 0.0)
                for (int x = 0; x < q_; ++x) prefix_[(k + 1) * static_cast<std::size_t>(q_) + x] /= mx;
        }
        std::fill(&suffix_[static_cast<std::size_t>(d) * q_], &suffix_[static_cast<std::size_t>(d) * q_] + q_, 1.0);
        for (int k = d - 1; k >= 0; --k) {
            const double* ph = &phi_[static_cast<std::size_t>(es[static_cast<std::size_t>(k)]) * q_];
            double mx = 0.0;
            for (int x = 0; x < q_; ++x) {
                suffix_[k * static_cast<std::size_t>(q_) + x] =
                    suffix_[(k + 1) * static_cast<std::size_t>(q_) + x] * ph[x];
                mx = std::max(mx, suffix_[k * static_cast<std::size_t>(q_) + x]);
            }
            if (mx > 0.0)
                for (int x = 0; x < q_; ++x) suffix_[k * static_cast<std::size_t>(q_) + x] /= mx;
        }
        for (int k = 0; k < d; ++k) {
            double* out = &psi_[static_cast<std::size_t>(es[static_cast<std::size_t>(k)]) * q_];
            for (int x = 0; x < q_; ++x)
                out[x] = prefix_[k * static_cast<std::size_t>(q_) + x] *
                         suffix_[(k + 1) * static_cast<std::size_t>(q_) + x];
            normalize_message(out);
        }
    }
}

void Decoder::check_pass() {
    for (int c = 0; c < g_.n_check; ++c) {
        const auto& es = g_.check_edges[static_cast<std::size_t>(c)];
        const int d = static_cast<int>(es.size());
        if (d == 1) {
            double* out = &phi_[static_cast<std::size_t>(es[0]) * q_];
            std::fill(out, out + q_, 0.0);
            out[0] = 1.0;  // empty convolution pins the symbol to 0
            normalize_message(out);
            continue;
        }
        if (d == 2) {
            // Phi to edge i is the other edge's message through both label
            // permutations; no convolution needed.
            for (int k = 0; k < 2; ++k) {
                const std::size_t eo = static_cast<std::size_t>(es[static_cast<std::size_t>(k)]);
                const std::size_t ei = static_cast<std::size_t>(es[static_cast<std::size_t>(1 - k)]);
                double* out = &phi_[eo * q_];
                const double* in = &psi_[ei * q_];
                for (int x = 0; x < q_; ++x)
                    out[x] = in[perm_in_[ei * q_ + perm_out_[eo * q_ + x]]];
                normalize_message(out);
            }
            continue;
        }

        if (cfg_.use_fast_transform) {
            // transformed permuted inputs
            for (int k = 0; k < d; ++k) {
                const std::size_t e = static_cast<std::size_t>(es[static_cast<std::size_t>(k)]);
                double* t = &scratch_[static_cast<std::size_t>(k) * q_];
                for (int x = 0; x < q_; ++x) t[x] = psi_[e * q_ + perm_in_[e * q_ + x]];
                wht_inplace({t, static_cast<std::size_t>(q_)});
            }
            std::fill(&prefix_[0], &prefix_[0] + q_, 1.0);
            for (int k = 0; k < d; ++k)
                for (int x = 0; x < q_; ++x)
                    prefix_[(k + 1) * static_cast<std::size_t>(q_) + x] =
                        prefix_[k * static_cast<std::size_t>(q_) + x] *
                        scratch_[static_cast<std::size_t>(k) * q_ + x];
            std::fill(&suffix_[static_cast<std::size_t>(d) * q_],
                      &suffix_[static_cast<std::size_t>(d) * q_] + q_, 1.0);
            for (int k = d - 1; k >= 0; --k)
                for (int x = 0; x < q_; ++x)
                    suffix_[k * static_cast<std::size_t>(q_) + x] =
                        suffix_[(k + 1) * static_cast<std::size_t>(q_) + x] *
                        scratch_[static_cast<std::size_t>(k) * q_ + x];

            double* tmp = &scratch_[static_cast<std::size_t>(d) * q_];
            for (int k = 0; k < d; ++k) {
                for (int x = 0; x < q_; ++x)
                    tmp[x] = prefix_[k * static_cast<std::size_t>(q_) + x] *
                             suffix_[(k + 1) * static_cast<std::size_t>(q_) + x];
                wht_inplace({tmp, static_cast<std::size_t>(q_)});
                const double scale = 1.0 / q_;
                const std::size_t e = static_cast<std::size_t>(es[static_cast<std::size_t>(k)]);
                double* out = &phi_[e * q_];
                for (int x = 0; x < q_; ++x) out[x] = tmp[perm_out_[e * q_ + x]] * scale;
                normalize_message(out);
            }
        } else {
            // reference path: direct double-sum convolutions
            std::vector<MessageVector> checked(static_cast<std::size_t>(d), MessageVector(q_));
            for (int k = 0; k < d; ++k) {
                const std::size_t e = static_cast<std::size_t>(es[static_cast<std::size_t>(k)]);
                for (int x = 0; x < q_; ++x)
                    checked[static_cast<std::size_t>(k)][x] = psi_[e * q_ + perm_in_[e * q_ + x]];
            }
            std::vector<MessageVector> pre(static_cast<std::size_t>(d + 1)), suf(static_cast<std::size_t>(d + 1));
            pre[0] = MessageVector::point_mass(q_, 0);
            for (int k = 0; k < d; ++k)
                pre[static_cast<std::size_t>(k + 1)] =
                    xor_convolve_direct(pre[static_cast<std::size_t>(k)], checked[static_cast<std::size_t>(k)]);
            suf[static_cast<std::size_t>(d)] = MessageVector::point_mass(q_, 0);
            for (int k = d - 1; k >= 0; --k)
                suf[static_cast<std::size_t>(k)] =
                    xor_convolve_direct(suf[static_cast<std::size_t>(k + 1)], checked[static_cast<std::size_t>(k)]);
            for (int k = 0; k < d; ++k) {
                const MessageVector conv =
                    xor_convolve_direct(pre[static_cast<std::size_t>(k)], suf[static_cast<std::size_t>(k + 1)]);
                const std::size_t e = static_cast<std::size_t>(es[static_cast<std::size_t>(k)]);
                double* out = &phi_[e * q_];
                for (int x = 0; x < q_; ++x) out[x] = conv[perm_out_[e * q_ + x]];
                normalize_message(out);
            }
        }
    }
}

void Decoder::decide_pass(int iter, DecodeResult& result, Rng& tie_rng,
                          std::vector<int>& zero_run) {
    double* d = &scratch_[0];
    for (int v = 0; v < g_.n_var; ++v) {
        const auto& es = g_.var_edges[static_cast<std::size_t>(v)];
        const double* c = (*init_)[static_cast<std::size_t>(v)].p.data();
        std::copy(c, c + q_, d);
        for (int e : es) {
            const double* ph = &phi_[static_cast<std::size_t>(e) * q_];
            double mx = 0.0;
            for (int x = 0; x < q_; ++x) {
                d[x] *= ph[x];
                mx = std::max(mx, d[x]);
            }
            if (mx > 0.0)
                for (int x = 0; x < q_; ++x) d[x] /= mx;
        }
        double mx = 0.0;
        for (int x = 0; x < q_; ++x) mx = std::max(mx, d[x]);
        int n_tied = 0;
        int pick = 0;
        if (mx > 0.0) {
            const double cut = mx * (1.0 - cfg_.tie_rel);
            for (int x = 0; x < q_; ++x)
                if (d[x] >= cut) ++n_tied;
            if (n_tied == 1) {
                for (int x = 0; x < q_; ++x)
                    if (d[x] >= cut) pick = x;
            } else {
                std::uint64_t target = tie_rng.below(static_cast<std::uint64_t>(n_tied));
                for (int x = 0; x < q_; ++x)
                    if (d[x] >= cut && target-- == 0) {
                        pick = x;
                        break;
                    }
            }
        } else {
            n_tied = q_;
            pick = static_cast<int>(tie_rng.below(static_cast<std::uint64_t>(q_)));
        }
        result.decisions[static_cast<std::size_t>(v)] = FieldElement{static_cast<std::uint16_t>(pick)};
        if (n_tied == 1 && pick == 0)
            ++zero_run[static_cast<std::size_t>(v)];
        else
            zero_run[static_cast<std::size_t>(v)] = 0;
        if (cfg_.record_trace) result.trace[static_cast<std::size_t>(iter)][static_cast<std::size_t>(v)] =
            FieldElement{static_cast<std::uint16_t>(pick)};
    }
}

DecodeResult Decoder::decode(const std::vector<MessageVector>& init) {
    if (static_cast<int>(init.size()) != g_.n_var)
        throw std::invalid_argument("decoder: init message count mismatch");
    for (const auto& c : init)
        if (c.q() != q_) throw std::invalid_argument("decoder: init message length mismatch");
    init_ = &init;
    extinction_ = false;

    const double u = 1.0 / q_;
    std::fill(phi_.begin(), phi_.end(), u);

    DecodeResult result;
    result.decisions.assign(static_cast<std::size_t>(g_.n_var), FieldElement{0});
    result.eventually_correct.assign(static_cast<std::size_t>(g_.n_var), 0);
    if (cfg_.record_trace)
        result.trace.assign(static_cast<std::size_t>(cfg_.max_iter + 1),
                            std::vector<FieldElement>(static_cast<std::size_t>(g_.n_var)));

    Rng tie_rng(derive_seed(cfg_.tie_break_seed, 0x71e5));
    std::vector<int> zero_run(static_cast<std::size_t>(g_.n_var), 0);

    // Once the check messages reach a value-level fixed point, every later
    // iteration computes identical decision vectors, so the trailing window
    // can be extrapolated exactly instead of iterated.
    const bool may_shortcut = !cfg_.record_trace;
    std::vector<double> phi_prev;
    bool fixed_point = false;
    int last_iter = cfg_.max_iter;

    for (int iter = 0; iter <= cfg_.max_iter; ++iter) {
        decide_pass(iter, result, tie_rng, zero_run);
        if (fixed_point) {
            const int remaining = cfg_.max_iter - iter;
            for (auto& run : zero_run)
                if (run > 0) run += remaining;  // a reset this iteration stays reset
            last_iter = iter;
            break;
        }
        if (iter == cfg_.max_iter) break;
        variable_pass();
        check_pass();
        if (may_shortcut) {
            fixed_point = !phi_prev.empty() && phi_prev == phi_;
            phi_prev = phi_;
        }
    }

    for (int v = 0; v < g_.n_var; ++v)
        result.eventually_correct[static_cast<std::size_t>(v)] =
            zero_run[static_cast<std::size_t>(v)] >= cfg_.ec_window ? 1 : 0;
    result.iterations_run = last_iter;
    result.had_extinction = extinction_;

    // final syndrome, reported only
    result.syndrome_ok = true;
    for (int c = 0; c < g_.n_check && result.syndrome_ok; ++c) {
        FieldElement acc{0};
        for (int e : g_.check_edges[static_cast<std::size_t>(c)]) {
            const auto& edge = g_.edges[static_cast<std::size_t>(e)];
            acc = add(acc, params_.mul(edge.label, result.decisions[static_cast<std::size_t>(edge.var)]));
        }
        if (acc.value != 0) result.syndrome_ok = false;
    }
    init_ = nullptr;
    return result;
}

}  // namespace nbldpc
