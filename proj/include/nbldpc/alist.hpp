#ifndef NBLDPC_ALIST_HPP
#define NBLDPC_ALIST_HPP

#include <string>

#include "nbldpc/gf.hpp"
#include "nbldpc/graph.hpp"

namespace nbldpc {

/// Extended alist text form of a labeled Tanner graph. Header line is
/// "N M q"; the usual alist blocks follow (max degrees, per-node degrees,
/// adjacency rows padded with 0), except each adjacency entry carries the
/// edge label as "index:exponent" with the label written as its discrete
/// log base alpha (0..q-2). Node and edge order is deterministic, so
/// export-import round-trips are lossless for a fixed field.
std::string export_code(const TannerGraph& g, const FieldParams& params);

/// Parses the extended alist format; throws std::runtime_error carrying the
/// offending line number on malformed input.
TannerGraph import_code(const std::string& text, const FieldParams& params);

/// Reads just the header of an extended alist to recover q (for picking the
/// field before a full import).
int peek_field_size(const std::string& text);

}  // namespace nbldpc

#endif
