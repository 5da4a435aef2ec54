#include "nbldpc/graph.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

namespace nbldpc {

// ---------------------------------------------------------------- degrees

std::vector<double> DegreeDistPair::parse_poly(const std::string& text) {
    std::vector<double> coeffs;
    auto bump = [&coeffs](int degree, double c) {
        if (degree + 1 > static_cast<int>(coeffs.size())) coeffs.resize(degree + 1, 0.0);
        coeffs[static_cast<std::size_t>(degree)] += c;
    };

    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    if (s.empty()) throw std::invalid_argument("empty degree polynomial");

    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t end = s.find('+', pos);
        if (end == std::string::npos) end = s.size();
        std::string term = s.substr(pos, end - pos);
        pos = end + 1;
        if (term.empty()) throw std::invalid_argument("malformed polynomial term in '" + text + "'");

        double coeff = 1.0;
        int exponent = 0;
        std::size_t xpos = term.find('x');
        std::string head = term.substr(0, xpos == std::string::npos ? term.size() : xpos);
        if (!head.empty() && head.back() == '*') head.pop_back();
        if (!head.empty()) {
            std::size_t used = 0;
            coeff = std::stod(head, &used);
            if (used != head.size())
                throw std::invalid_argument("bad coefficient '" + head + "' in '" + text + "'");
        }
        if (xpos != std::string::npos) {
            exponent = 1;
            std::string tail = term.substr(xpos + 1);
            if (!tail.empty()) {
                if (tail[0] != '^')
                    throw std::invalid_argument("bad term '" + term + "' in '" + text + "'");
                exponent = std::stoi(tail.substr(1));
                if (exponent < 0) throw std::invalid_argument("negative exponent in '" + text + "'");
            }
        }
        if (coeff < 0.0) throw std::invalid_argument("negative coefficient in '" + text + "'");
        bump(exponent + 1, coeff);  // x^k term lives on degree-(k+1) nodes
    }
    return coeffs;
}

DegreeDistPair DegreeDistPair::parse(const std::string& lambda_text, const std::string& rho_text) {
    DegreeDistPair dd;
    dd.lambda = parse_poly(lambda_text);
    dd.rho = parse_poly(rho_text);
    dd.validate();
    return dd;
}

void DegreeDistPair::validate() const {
    auto check_one = [](const std::vector<double>& c, const char* which) {
        if (c.size() < 2) throw std::invalid_argument(std::string(which) + " has no positive degree");
        double total = 0.0;
        for (double v : c) {
            if (v < 0.0) throw std::invalid_argument(std::string(which) + " has negative coefficient");
            total += v;
        }
        if (std::abs(total - 1.0) > 1e-9)
            throw std::invalid_argument(std::string(which) + " coefficients must sum to 1");
    };
    check_one(lambda, "lambda");
    check_one(rho, "rho");
}

double DegreeDistPair::mu() const {
    const double lambda2 = lambda.size() > 2 ? lambda[2] : 0.0;
    double rho_excess = 0.0;
    for (std::size_t i = 1; i < rho.size(); ++i) rho_excess += (static_cast<double>(i) - 1.0) * rho[i];
    return lambda2 * rho_excess;
}

namespace {

std::vector<int> counts_from_edge_perspective(const std::vector<double>& coeffs, double scale,
                                              const char* which) {
    // node fraction of degree i is (c_i / i) / sum_j (c_j / j); scale is N
    // for variables, E for checks (then the divisor is absorbed).
    std::vector<int> counts(coeffs.size(), 0);
    for (std::size_t i = 1; i < coeffs.size(); ++i) {
        if (coeffs[i] == 0.0) continue;
        const double exact = scale * coeffs[i] / static_cast<double>(i);
        const double rounded = std::round(exact);
        if (std::abs(exact - rounded) > 1e-6 * std::max(1.0, exact))
            throw std::invalid_argument(std::string(which) + ": degree-" + std::to_string(i) +
                                        " node count " + std::to_string(exact) +
                                        " is not an integer");
        counts[i] = static_cast<int>(rounded);
        if (counts[i] <= 0)
            throw std::invalid_argument(std::string(which) + ": empty degree class " +
                                        std::to_string(i));
    }
    return counts;
}

}  // namespace

std::vector<int> DegreeDistPair::variable_node_counts(int N) const {
    double z = 0.0;
    for (std::size_t i = 1; i < lambda.size(); ++i) z += lambda[i] / static_cast<double>(i);
    auto counts = counts_from_edge_perspective(lambda, N / z, "lambda");
    int total = 0;
    for (int c : counts) total += c;
    if (total != N)
        throw std::invalid_argument("lambda node counts sum to " + std::to_string(total) +
                                    ", expected N = " + std::to_string(N));
    return counts;
}

std::vector<int> DegreeDistPair::check_node_counts(int N) const {
    auto vc = variable_node_counts(N);
    long long edges = 0;
    for (std::size_t i = 0; i < vc.size(); ++i) edges += static_cast<long long>(i) * vc[i];
    auto counts = counts_from_edge_perspective(rho, static_cast<double>(edges), "rho");
    long long check_sockets = 0;
    for (std::size_t i = 0; i < counts.size(); ++i)
        check_sockets += static_cast<long long>(i) * counts[i];
    if (check_sockets != edges)
        throw std::invalid_argument("socket imbalance: " + std::to_string(edges) +
                                    " variable sockets vs " + std::to_string(check_sockets) +
                                    " check sockets");
    return counts;
}

// ------------------------------------------------------------------ graph

void TannerGraph::rebuild_adjacency() {
    var_edges.assign(static_cast<std::size_t>(n_var), {});
    check_edges.assign(static_cast<std::size_t>(n_check), {});
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
        var_edges[static_cast<std::size_t>(edges[e].var)].push_back(e);
        check_edges[static_cast<std::size_t>(edges[e].check)].push_back(e);
    }
}

void TannerGraph::check_consistency() const {
    for (const auto& e : edges) {
        if (e.var < 0 || e.var >= n_var || e.check < 0 || e.check >= n_check)
            throw std::runtime_error("edge endpoint out of range");
        if (e.label.value == 0 || e.label.value >= q)
            throw std::runtime_error("edge label out of range");
    }
}

void EnsembleSpec::validate(const FieldParams& params) const {
    if (N < 1) throw std::invalid_argument("ensemble: N must be >= 1");
    if (m != params.m()) throw std::invalid_argument("ensemble: m mismatch with field");
    dd.validate();
    if (s_g < 1 || s_g > s_c) throw std::invalid_argument("ensemble: need 1 <= s_g <= s_c");
    for (auto h : forbidden)
        if (h.value == 0 || h.value >= params.q())
            throw std::invalid_argument("ensemble: forbidden set must contain nonzero elements");
}

std::vector<FieldElement> EnsembleSpec::closed_forbidden(const FieldParams& params,
                                                         bool* warned) const {
    std::vector<char> in(static_cast<std::size_t>(params.q()), 0);
    for (auto h : forbidden) in[h.value] = 1;
    bool added = false;
    for (auto h : forbidden) {
        const FieldElement hi = params.inv(h);
        if (!in[hi.value]) {
            in[hi.value] = 1;
            added = true;
        }
    }
    if (warned) *warned = added;
    std::vector<FieldElement> out;
    for (int v = 1; v < params.q(); ++v)
        if (in[static_cast<std::size_t>(v)]) out.push_back(FieldElement{static_cast<std::uint16_t>(v)});
    return out;
}

TannerGraph sample_graph(const EnsembleSpec& spec, Rng& rng) {
    const auto vc = spec.dd.variable_node_counts(spec.N);
    const auto cc = spec.dd.check_node_counts(spec.N);

    TannerGraph g;
    g.n_var = spec.N;
    g.q = 1 << spec.m;

    std::vector<int> var_socket;  // socket -> variable node
    {
        int v = 0;
        for (std::size_t d = 1; d < vc.size(); ++d)
            for (int k = 0; k < vc[d]; ++k, ++v)
                for (std::size_t s = 0; s < d; ++s) var_socket.push_back(v);
    }
    std::vector<int> check_socket;
    {
        int c = 0;
        for (std::size_t d = 1; d < cc.size(); ++d)
            for (int k = 0; k < cc[d]; ++k, ++c)
                for (std::size_t s = 0; s < d; ++s) check_socket.push_back(c);
        g.n_check = c;
    }

    // Fisher-Yates on the check sockets = uniform matching.
    for (std::size_t i = check_socket.size(); i > 1; --i) {
        const std::size_t j = rng.below(i);
        std::swap(check_socket[i - 1], check_socket[j]);
    }

    g.edges.resize(var_socket.size());
    for (std::size_t k = 0; k < var_socket.size(); ++k) {
        g.edges[k].var = var_socket[k];
        g.edges[k].check = check_socket[k];
        g.edges[k].label =
            FieldElement{static_cast<std::uint16_t>(1 + rng.below(static_cast<std::uint64_t>(g.q - 1)))};
    }
    g.rebuild_adjacency();
    return g;
}

// ----------------------------------------------------------- zigzag cycles

namespace {

struct ContractedEdge {
    int var;
    int check_a, check_b;
    int edge_a, edge_b;  // Tanner edge ids at each endpoint
};

struct CycleSearch {
    const TannerGraph& g;
    int max_weight;
    std::vector<ContractedEdge> cedges;
    std::vector<std::vector<std::pair<int, bool>>> incidence;  // (cedge, at_a_side)
    std::vector<char> var_used;
    std::vector<char> check_on_path;
    std::vector<std::pair<int, bool>> path;  // (cedge, traversed from a-side)
    int start = 0;
    std::vector<ZigzagCycle>* out;

    CycleSearch(const TannerGraph& graph, int w, std::vector<ZigzagCycle>* sink)
        : g(graph), max_weight(w), out(sink) {
        for (int v = 0; v < g.n_var; ++v) {
            const auto& es = g.var_edges[static_cast<std::size_t>(v)];
            if (es.size() != 2) continue;
            ContractedEdge ce;
            ce.var = v;
            ce.edge_a = es[0];
            ce.edge_b = es[1];
            ce.check_a = g.edges[static_cast<std::size_t>(es[0])].check;
            ce.check_b = g.edges[static_cast<std::size_t>(es[1])].check;
            cedges.push_back(ce);
        }
        incidence.assign(static_cast<std::size_t>(g.n_check), {});
        for (int i = 0; i < static_cast<int>(cedges.size()); ++i) {
            const auto& ce = cedges[static_cast<std::size_t>(i)];
            incidence[static_cast<std::size_t>(ce.check_a)].push_back({i, true});
            if (ce.check_b != ce.check_a)
                incidence[static_cast<std::size_t>(ce.check_b)].push_back({i, false});
        }
        var_used.assign(cedges.size(), 0);
        check_on_path.assign(static_cast<std::size_t>(g.n_check), 0);
    }

    void run() {
        if (max_weight < 1) return;
        for (start = 0; start < g.n_check; ++start) {
            check_on_path[static_cast<std::size_t>(start)] = 1;
            dfs(start);
            check_on_path[static_cast<std::size_t>(start)] = 0;
        }
    }

    void record() {
        const int s = static_cast<int>(path.size());
        ZigzagCycle z;
        z.vars.resize(static_cast<std::size_t>(s));
        z.check_of.resize(static_cast<std::size_t>(s));
        z.enter_edge.resize(static_cast<std::size_t>(s));
        z.leave_edge.resize(static_cast<std::size_t>(s));
        for (int i = 0; i < s; ++i) {
            const auto [ci, from_a] = path[static_cast<std::size_t>(i)];
            const auto& ce = cedges[static_cast<std::size_t>(ci)];
            z.vars[static_cast<std::size_t>(i)] = ce.var;
            z.enter_edge[static_cast<std::size_t>(i)] = from_a ? ce.edge_a : ce.edge_b;
            z.leave_edge[static_cast<std::size_t>(i)] = from_a ? ce.edge_b : ce.edge_a;
            z.check_of[static_cast<std::size_t>(i)] = from_a ? ce.check_b : ce.check_a;
        }
        canonicalize(z);
        out->push_back(std::move(z));
    }

    static void rotate_cycle(ZigzagCycle& z, int r) {
        std::rotate(z.vars.begin(), z.vars.begin() + r, z.vars.end());
        std::rotate(z.check_of.begin(), z.check_of.begin() + r, z.check_of.end());
        std::rotate(z.enter_edge.begin(), z.enter_edge.begin() + r, z.enter_edge.end());
        std::rotate(z.leave_edge.begin(), z.leave_edge.begin() + r, z.leave_edge.end());
    }

    static void reverse_cycle(ZigzagCycle& z) {
        const int s = z.weight();
        ZigzagCycle r;
        r.vars.resize(static_cast<std::size_t>(s));
        r.check_of.resize(static_cast<std::size_t>(s));
        r.enter_edge.resize(static_cast<std::size_t>(s));
        r.leave_edge.resize(static_cast<std::size_t>(s));
        for (int i = 0; i < s; ++i) {
            const int j = (s - i) % s;  // old index of the i-th var in reverse order
            r.vars[static_cast<std::size_t>(i)] = z.vars[static_cast<std::size_t>(j)];
            r.enter_edge[static_cast<std::size_t>(i)] = z.leave_edge[static_cast<std::size_t>(j)];
            r.leave_edge[static_cast<std::size_t>(i)] = z.enter_edge[static_cast<std::size_t>(j)];
            r.check_of[static_cast<std::size_t>(i)] =
                z.check_of[static_cast<std::size_t>((j + s - 1) % s)];
        }
        z = std::move(r);
    }

    static void canonicalize(ZigzagCycle& z) {
        const int s = z.weight();
        if (s < 2) return;
        const int pos = static_cast<int>(
            std::min_element(z.vars.begin(), z.vars.end()) - z.vars.begin());
        rotate_cycle(z, pos);
        if (s >= 3 && z.vars[1] > z.vars[static_cast<std::size_t>(s - 1)]) {
            reverse_cycle(z);
            rotate_cycle(z, static_cast<int>(std::min_element(z.vars.begin(), z.vars.end()) -
                                             z.vars.begin()));
        } else if (s == 2 && z.check_of[0] > z.check_of[1]) {
            reverse_cycle(z);
            if (z.vars[0] != std::min(z.vars[0], z.vars[1])) rotate_cycle(z, 1);
        }
    }

    void dfs(int cur) {
        for (const auto& [ci, at_a] : incidence[static_cast<std::size_t>(cur)]) {
            const auto& ce = cedges[static_cast<std::size_t>(ci)];
            if (var_used[static_cast<std::size_t>(ci)]) continue;
            const int next = at_a ? ce.check_b : ce.check_a;
            if (next == start) {
                // closing edge; keep one traversal direction per cycle
                if (path.empty() || cedges[static_cast<std::size_t>(path.front().first)].var < ce.var) {
                    path.push_back({ci, at_a});
                    record();
                    path.pop_back();
                }
            } else if (next > start && !check_on_path[static_cast<std::size_t>(next)] &&
                       static_cast<int>(path.size()) + 1 < max_weight) {
                var_used[static_cast<std::size_t>(ci)] = 1;
                check_on_path[static_cast<std::size_t>(next)] = 1;
                path.push_back({ci, at_a});
                dfs(next);
                path.pop_back();
                check_on_path[static_cast<std::size_t>(next)] = 0;
                var_used[static_cast<std::size_t>(ci)] = 0;
            }
        }
    }
};

}  // namespace

std::vector<ZigzagCycle> find_zigzag_cycles(const TannerGraph& g, int max_weight) {
    std::vector<ZigzagCycle> out;
    CycleSearch search(g, max_weight, &out);
    search.run();
    return out;
}

FieldElement cycle_parameter(const TannerGraph& g, const ZigzagCycle& z,
                             const FieldParams& params) {
    const int s = z.weight();
    FieldElement beta{1};
    for (int i = 0; i < s; ++i) {
        const FieldElement h_out = g.edges[static_cast<std::size_t>(z.leave_edge[i])].label;
        const FieldElement h_in =
            g.edges[static_cast<std::size_t>(z.enter_edge[(i + 1) % s])].label;
        beta = params.mul(beta, params.mul(params.inv(h_out), h_in));
    }
    return beta;
}

// ---------------------------------------------------------- stopping sets

namespace {

constexpr int kStoppingSetSafetyLimit = 6;

struct StoppingSearch {
    const TannerGraph& g;
    int max_weight;
    bool stop_at_first;
    bool found_any = false;
    std::vector<std::vector<int>>* out;

    std::vector<int> members;
    std::vector<char> in_set;
    std::vector<int> check_count;
    std::set<std::vector<int>> visited;

    StoppingSearch(const TannerGraph& graph, int w, bool first_only,
                   std::vector<std::vector<int>>* sink)
        : g(graph), max_weight(w), stop_at_first(first_only), out(sink) {
        in_set.assign(static_cast<std::size_t>(g.n_var), 0);
        check_count.assign(static_cast<std::size_t>(g.n_check), 0);
    }

    void add(int v) {
        members.push_back(v);
        in_set[static_cast<std::size_t>(v)] = 1;
        for (int e : g.var_edges[static_cast<std::size_t>(v)])
            ++check_count[static_cast<std::size_t>(g.edges[static_cast<std::size_t>(e)].check)];
    }

    void remove(int v) {
        members.pop_back();
        in_set[static_cast<std::size_t>(v)] = 0;
        for (int e : g.var_edges[static_cast<std::size_t>(v)])
            --check_count[static_cast<std::size_t>(g.edges[static_cast<std::size_t>(e)].check)];
    }

    void run() {
        if (max_weight < 1) return;
        for (int v0 = 0; v0 < g.n_var && !(stop_at_first && found_any); ++v0) {
            add(v0);
            explore(v0);
            remove(v0);
        }
    }

    // true while the caller should keep searching
    void explore(int v0) {
        if (stop_at_first && found_any) return;
        std::vector<int> key = members;
        std::sort(key.begin(), key.end());
        if (!visited.insert(key).second) return;

        // deficient checks: seen exactly once from the current set
        std::vector<int> deficient;
        for (int v : members)
            for (int e : g.var_edges[static_cast<std::size_t>(v)]) {
                const int c = g.edges[static_cast<std::size_t>(e)].check;
                if (check_count[static_cast<std::size_t>(c)] == 1) {
                    if (deficient.empty() || deficient.back() != c) deficient.push_back(c);
                }
            }
        std::sort(deficient.begin(), deficient.end());
        deficient.erase(std::unique(deficient.begin(), deficient.end()), deficient.end());

        if (deficient.empty()) {
            found_any = true;
            if (out) out->push_back(key);
            if (stop_at_first) return;
        }
        if (static_cast<int>(members.size()) == max_weight) return;

        if (!deficient.empty()) {
            // grow through the deficient check with the fewest candidates
            std::vector<int> best;
            bool have = false;
            for (int c : deficient) {
                std::vector<int> cand;
                for (int e : g.check_edges[static_cast<std::size_t>(c)]) {
                    const int u = g.edges[static_cast<std::size_t>(e)].var;
                    if (u > v0 && !in_set[static_cast<std::size_t>(u)]) cand.push_back(u);
                }
                std::sort(cand.begin(), cand.end());
                cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
                if (!have || cand.size() < best.size()) {
                    best = std::move(cand);
                    have = true;
                }
                if (best.empty()) return;  // unfixable deficiency
            }
            for (int u : best) {
                add(u);
                explore(v0);
                remove(u);
                if (stop_at_first && found_any) return;
            }
        } else {
            // supersets of a stopping set may be stopping sets as well
            for (int u = v0 + 1; u < g.n_var; ++u) {
                if (in_set[static_cast<std::size_t>(u)]) continue;
                add(u);
                explore(v0);
                remove(u);
                if (stop_at_first && found_any) return;
            }
        }
    }
};

}  // namespace

std::vector<std::vector<int>> find_stopping_sets(const TannerGraph& g, int max_weight) {
    if (max_weight > kStoppingSetSafetyLimit)
        throw std::invalid_argument("stopping-set search limited to weight <= " +
                                    std::to_string(kStoppingSetSafetyLimit));
    std::vector<std::vector<int>> out;
    StoppingSearch search(g, max_weight, false, &out);
    search.run();
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return out;
}

bool has_stopping_set(const TannerGraph& g, int max_weight) {
    if (max_weight > kStoppingSetSafetyLimit)
        throw std::invalid_argument("stopping-set search limited to weight <= " +
                                    std::to_string(kStoppingSetSafetyLimit));
    StoppingSearch search(g, max_weight, true, nullptr);
    search.run();
    return search.found_any;
}

// ------------------------------------------------------------ expurgation

TannerGraph expurgate(const EnsembleSpec& spec, const FieldParams& params, Rng& rng,
                      ExpurgateDiagnostics* diag, int graph_budget, int sweep_budget) {
    spec.validate(params);
    std::vector<char> forbidden(static_cast<std::size_t>(params.q()), 0);
    for (auto h : spec.closed_forbidden(params)) forbidden[h.value] = 1;

    ExpurgateDiagnostics local;
    ExpurgateDiagnostics& d = diag ? *diag : local;
    d = {};

    for (int attempt = 0; attempt < graph_budget; ++attempt) {
        ++d.graph_attempts;
        TannerGraph g = sample_graph(spec, rng);
        if (spec.s_g > 1 && has_stopping_set(g, spec.s_g - 1)) continue;
        if (spec.s_c == spec.s_g || spec.forbidden.empty()) return g;

        auto cycles = find_zigzag_cycles(g, spec.s_c - 1);
        std::erase_if(cycles, [&](const ZigzagCycle& z) { return z.weight() < spec.s_g; });

        for (int sweep = 0; sweep < sweep_budget; ++sweep) {
            ++d.label_sweeps;
            bool violated = false;
            for (const auto& z : cycles) {
                const FieldElement beta = cycle_parameter(g, z, params);
                if (!forbidden[beta.value]) continue;
                violated = true;
                const int s = z.weight();
                const std::uint64_t slot = rng.below(static_cast<std::uint64_t>(2 * s));
                const int e = slot < static_cast<std::uint64_t>(s)
                                  ? z.enter_edge[static_cast<std::size_t>(slot)]
                                  : z.leave_edge[static_cast<std::size_t>(slot - s)];
                g.edges[static_cast<std::size_t>(e)].label = FieldElement{
                    static_cast<std::uint16_t>(1 + rng.below(static_cast<std::uint64_t>(params.q() - 1)))};
            }
            if (!violated) return g;
        }
        // Some graphs admit no valid labeling at all (overlapping cycles can
        // force pairwise constraints with no joint solution); such graphs
        // have zero weight in the ensemble, so exhausting the sweeps rejects
        // the graph like the stopping-set phase does.
        ++d.label_rejections;
    }
    throw std::runtime_error("expurgation exhausted " + std::to_string(graph_budget) +
                             " graph samples (s_g=" + std::to_string(spec.s_g) +
                             ", |forbidden|=" + std::to_string(spec.forbidden.size()) + ", " +
                             std::to_string(d.label_rejections) + " label-phase rejections)");
}

TannerGraph make_zigzag_graph(const FieldParams& params, std::span<const FieldElement> gammas) {
    const int s = static_cast<int>(gammas.size());
    if (s < 1) throw std::invalid_argument("zigzag graph needs at least one symbol");
    TannerGraph g;
    g.n_var = s;
    g.n_check = s;
    g.q = params.q();
    for (int i = 0; i < s; ++i) {
        if (gammas[i].value == 0 || gammas[i].value >= params.q())
            throw std::invalid_argument("zigzag step ratios must be nonzero field elements");
        g.edges.push_back({i, i, FieldElement{1}});                 // check i to variable i
        g.edges.push_back({(i + 1) % s, i, gammas[i]});             // check i to variable i+1
    }
    g.rebuild_adjacency();
    return g;
}

}  // namespace nbldpc
