#ifndef NBLDPC_GRAPH_HPP
#define NBLDPC_GRAPH_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nbldpc/gf.hpp"
#include "nbldpc/rng.hpp"

namespace nbldpc {

/// Edge-perspective degree distribution pair, lambda(x) = sum lambda_i x^{i-1}.
/// coefficient index == node degree (index 0 and 1 of lambda/rho unused for
/// the usual distributions, but degree-1 entries are accepted).
struct DegreeDistPair {
    std::vector<double> lambda;  // lambda[i] = fraction of edges on degree-i variable nodes
    std::vector<double> rho;

    /// Parses "x", "x^2", "0.5x+0.5x^2", "0.5*x^3 + 0.5*x^5". A term c*x^k
    /// contributes coefficient c at node degree k+1.
    static std::vector<double> parse_poly(const std::string& text);
    static DegreeDistPair parse(const std::string& lambda_text, const std::string& rho_text);

    void validate() const;

    /// lambda'(0) * rho'(1): the degree-2 edge fraction times the mean
    /// check excess degree. Governs the cycle census (mu^s / 2s expected
    /// zigzag cycles of weight s).
    double mu() const;

    /// Node counts for a length-N realization; throws std::invalid_argument
    /// when the implied per-degree counts are not integers.
    std::vector<int> variable_node_counts(int N) const;  // index = degree
    std::vector<int> check_node_counts(int N) const;
};

struct GraphEdge {
    int var = 0;
    int check = 0;
    FieldElement label{1};
};

/// Labeled bipartite multigraph; the code definition. Immutable once built
/// (expurgate mutates labels only while constructing its result).
struct TannerGraph {
    int n_var = 0;
    int n_check = 0;
    int q = 0;  // field size, labels in 1..q-1
    std::vector<GraphEdge> edges;
    std::vector<std::vector<int>> var_edges;    // edge indices per variable node
    std::vector<std::vector<int>> check_edges;  // edge indices per check node

    void rebuild_adjacency();
    void check_consistency() const;
};

/// Zigzag cycle of weight s: variable nodes vars[0..s-1], all degree 2,
/// check_of[i] joining vars[i] to vars[(i+1) % s]. enter_edge[i] is the
/// Tanner edge from the previous check into vars[i], leave_edge[i] the edge
/// from vars[i] into check_of[i]. Canonical form starts at the smallest
/// variable index with its smaller cycle neighbor second; reversing the
/// traversal inverts the cycle parameter.
struct ZigzagCycle {
    std::vector<int> vars;
    std::vector<int> check_of;
    std::vector<int> enter_edge;
    std::vector<int> leave_edge;

    int weight() const { return static_cast<int>(vars.size()); }
};

/// Expurgated ensemble description: length N over GF(2^m), degree pair,
/// stopping-set expurgation below weight s_g, label expurgation for zigzag
/// cycles of weight in [s_g, s_c-1] whose cycle parameter falls in the
/// forbidden set. forbidden is closed under inversion on construction.
struct EnsembleSpec {
    int N = 0;
    int m = 2;
    DegreeDistPair dd;
    int s_g = 1;
    int s_c = 1;
    std::vector<FieldElement> forbidden;

    void validate(const FieldParams& params) const;

    /// Returns the forbidden set closed under field inversion; sets *warned
    /// when closure added elements.
    std::vector<FieldElement> closed_forbidden(const FieldParams& params,
                                               bool* warned = nullptr) const;
};

/// Uniform configuration-model draw: socket matching plus uniform nonzero
/// labels. Multi-edges are kept (a double edge is a weight-1 zigzag cycle).
TannerGraph sample_graph(const EnsembleSpec& spec, Rng& rng);

/// All zigzag cycles of weight <= max_weight, each reported once in
/// canonical form.
std::vector<ZigzagCycle> find_zigzag_cycles(const TannerGraph& g, int max_weight);

/// Cycle parameter: product around the cycle of (leave label)^-1 * (next
/// enter label).
FieldElement cycle_parameter(const TannerGraph& g, const ZigzagCycle& z, const FieldParams& params);

/// All nonempty stopping sets of size <= max_weight (every neighboring
/// check connected at least twice), by pruned subset search. max_weight
/// above the safety limit (6) is a configuration error.
std::vector<std::vector<int>> find_stopping_sets(const TannerGraph& g, int max_weight);

/// True iff some stopping set of size <= max_weight exists (early-exit
/// variant used by expurgation).
bool has_stopping_set(const TannerGraph& g, int max_weight);

struct ExpurgateDiagnostics {
    int graph_attempts = 0;
    int label_sweeps = 0;
    int label_rejections = 0;  // graphs with no labeling found within the sweep budget
};

/// Draws a member of the expurgated ensemble: rejection-resamples graphs
/// until no stopping set of weight < s_g remains, then sweeps the zigzag
/// cycles of weight in [s_g, s_c-1], redrawing one label on each offending
/// cycle until no cycle parameter lies in the forbidden set. Graphs whose
/// cycle overlap structure admits no valid labeling are rejected like the
/// stopping-set phase rejects. Throws std::runtime_error with diagnostics
/// when the graph budget is exhausted.
TannerGraph expurgate(const EnsembleSpec& spec, const FieldParams& params, Rng& rng,
                      ExpurgateDiagnostics* diag = nullptr, int graph_budget = 100000,
                      int sweep_budget = 200);

/// Single zigzag-cycle code of symbol code length s realizing the given
/// step ratios: variable i joins check i-1 (label 1) and check i (wrapping),
/// with the check-i outgoing label set to gammas[i].
TannerGraph make_zigzag_graph(const FieldParams& params, std::span<const FieldElement> gammas);

}  // namespace nbldpc

#endif
