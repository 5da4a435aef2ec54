#include "nbldpc/alist.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace nbldpc {

namespace {

struct LineReader {
    std::istringstream in;
    int line_no = 0;

    explicit LineReader(const std::string& text) : in(text) {}

    std::vector<std::string> next_tokens() {
        std::string line;
        while (std::getline(in, line)) {
            ++line_no;
            std::istringstream ls(line);
            std::vector<std::string> toks;
            std::string t;
            while (ls >> t) toks.push_back(t);
            if (!toks.empty()) return toks;
        }
        throw std::runtime_error("alist: unexpected end of input after line " +
                                 std::to_string(line_no));
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw std::runtime_error("alist: line " + std::to_string(line_no) + ": " + msg);
    }
};

long parse_long(LineReader& r, const std::string& tok) {
    try {
        std::size_t used = 0;
        const long v = std::stol(tok, &used);
        if (used != tok.size()) r.fail("bad integer '" + tok + "'");
        return v;
    } catch (const std::logic_error&) {
        r.fail("bad integer '" + tok + "'");
    }
}

}  // namespace

std::string export_code(const TannerGraph& g, const FieldParams& params) {
    g.check_consistency();
    std::ostringstream out;
    out << g.n_var << ' ' << g.n_check << ' ' << g.q << '\n';

    std::size_t dv = 0, dc = 0;
    for (const auto& es : g.var_edges) dv = std::max(dv, es.size());
    for (const auto& es : g.check_edges) dc = std::max(dc, es.size());
    out << dv << ' ' << dc << '\n';

    for (int v = 0; v < g.n_var; ++v)
        out << g.var_edges[static_cast<std::size_t>(v)].size() << (v + 1 < g.n_var ? ' ' : '\n');
    for (int c = 0; c < g.n_check; ++c)
        out << g.check_edges[static_cast<std::size_t>(c)].size() << (c + 1 < g.n_check ? ' ' : '\n');

    auto write_row = [&](const std::vector<int>& es, bool var_side, std::size_t width) {
        for (std::size_t k = 0; k < width; ++k) {
            if (k) out << ' ';
            if (k < es.size()) {
                const auto& e = g.edges[static_cast<std::size_t>(es[k])];
                const int peer = var_side ? e.check : e.var;
                out << peer + 1 << ':' << params.log(e.label);
            } else {
                out << 0;
            }
        }
        out << '\n';
    };
    for (int v = 0; v < g.n_var; ++v) write_row(g.var_edges[static_cast<std::size_t>(v)], true, dv);
    for (int c = 0; c < g.n_check; ++c) write_row(g.check_edges[static_cast<std::size_t>(c)], false, dc);
    return out.str();
}

int peek_field_size(const std::string& text) {
    LineReader r(text);
    auto toks = r.next_tokens();
    if (toks.size() != 3) r.fail("header must be 'N M q'");
    const long q = parse_long(r, toks[2]);
    if (q < 4 || (q & (q - 1)) != 0) r.fail("q must be a power of two >= 4");
    return static_cast<int>(q);
}

TannerGraph import_code(const std::string& text, const FieldParams& params) {
    LineReader r(text);
    auto header = r.next_tokens();
    if (header.size() != 3) r.fail("header must be 'N M q'");
    const long N = parse_long(r, header[0]);
    const long M = parse_long(r, header[1]);
    const long q = parse_long(r, header[2]);
    if (N < 1 || M < 1) r.fail("node counts must be positive");
    if (q != params.q()) r.fail("field size " + std::to_string(q) + " does not match GF(2^" +
                                std::to_string(params.m()) + ")");

    auto dims = r.next_tokens();
    if (dims.size() != 2) r.fail("expected 'dmax_v dmax_c'");
    (void)parse_long(r, dims[0]);
    (void)parse_long(r, dims[1]);

    auto read_degrees = [&](long count) {
        std::vector<long> deg;
        while (static_cast<long>(deg.size()) < count) {
            for (const auto& t : r.next_tokens()) {
                const long d = parse_long(r, t);
                if (d < 0) r.fail("negative degree");
                deg.push_back(d);
            }
        }
        if (static_cast<long>(deg.size()) != count) r.fail("degree list length mismatch");
        return deg;
    };
    const auto var_deg = read_degrees(N);
    const auto check_deg = read_degrees(M);

    TannerGraph g;
    g.n_var = static_cast<int>(N);
    g.n_check = static_cast<int>(M);
    g.q = static_cast<int>(q);

    // var-side rows define the edges; check-side rows are validated against
    // them afterwards
    for (long v = 0; v < N; ++v) {
        auto toks = r.next_tokens();
        long listed = 0;
        for (const auto& t : toks) {
            if (t == "0") continue;  // padding
            const auto colon = t.find(':');
            if (colon == std::string::npos) r.fail("entry '" + t + "' is not 'check:exponent'");
            const long c = parse_long(r, t.substr(0, colon));
            const long e = parse_long(r, t.substr(colon + 1));
            if (c < 1 || c > M) r.fail("check index " + std::to_string(c) + " out of range");
            if (e < 0 || e > q - 2)
                r.fail("label exponent " + std::to_string(e) + " out of range 0.." +
                       std::to_string(q - 2));
            g.edges.push_back({static_cast<int>(v), static_cast<int>(c - 1),
                               params.alpha_pow(e)});
            ++listed;
        }
        if (listed != var_deg[static_cast<std::size_t>(v)])
            r.fail("variable node " + std::to_string(v + 1) + " lists " + std::to_string(listed) +
                   " edges, degree says " + std::to_string(var_deg[static_cast<std::size_t>(v)]));
    }

    // check-side rows: same multiset of (peer, exponent) per check
    std::vector<std::vector<std::pair<long, long>>> expected(static_cast<std::size_t>(M));
    for (std::size_t k = 0; k < g.edges.size(); ++k)
        expected[static_cast<std::size_t>(g.edges[k].check)].push_back(
            {g.edges[k].var + 1, params.log(g.edges[k].label)});

    for (long c = 0; c < M; ++c) {
        auto toks = r.next_tokens();
        std::vector<std::pair<long, long>> got;
        for (const auto& t : toks) {
            if (t == "0") continue;
            const auto colon = t.find(':');
            if (colon == std::string::npos) r.fail("entry '" + t + "' is not 'var:exponent'");
            const long v = parse_long(r, t.substr(0, colon));
            const long e = parse_long(r, t.substr(colon + 1));
            if (v < 1 || v > N) r.fail("variable index " + std::to_string(v) + " out of range");
            if (e < 0 || e > q - 2) r.fail("label exponent " + std::to_string(e) + " out of range");
            got.push_back({v, e});
        }
        if (static_cast<long>(got.size()) != check_deg[static_cast<std::size_t>(c)])
            r.fail("check node " + std::to_string(c + 1) + " degree mismatch");
        auto want = expected[static_cast<std::size_t>(c)];
        std::sort(got.begin(), got.end());
        std::sort(want.begin(), want.end());
        if (got != want)
            r.fail("check node " + std::to_string(c + 1) +
                   " adjacency disagrees with the variable-side rows");
    }

    g.rebuild_adjacency();
    g.check_consistency();
    return g;
}

}  // namespace nbldpc
