#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sbm/graph.hpp"

namespace sbm {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Text format, all indices 0-based, '#' starts a comment:
//   line 1:  <node_count> <label_count> <scenario_count> <budget>
//   line 2:  costs <c_0> ... <c_{K-1}>        ("inf" marks an unblockable label)
//   line 3:  seeds <i_1> ... <i_s>
//   then:    arcs <m>   followed by m lines "<tail> <head> <label>"
//   then per scenario: "scenario <w> <t>" followed by t live arc ids.
// save_instance writes the canonical form; saving a loaded file reproduces
// it byte for byte.
Instance load_instance(std::istream& in, const std::string& origin = "<stream>");
Instance load_instance_file(const std::string& path);
void save_instance(std::ostream& out, const Instance& inst);
std::string instance_to_string(const Instance& inst);
void save_instance_file(const std::string& path, const Instance& inst);

// Whitespace-separated edge list with '#' comments (SNAP convention).
// Node ids are remapped to dense 0-based indices in first-seen order.
// Self-loops are dropped; duplicate edges are dropped (for undirected
// input, (u,v) and (v,u) count as the same edge).
struct SnapEdges {
    int node_count = 0;
    std::vector<std::pair<int, int>> edges;   // remapped, input order
    size_t self_loops_dropped = 0;
    size_t duplicates_dropped = 0;
};
SnapEdges load_snap_edges(const std::string& path, bool undirected);

// Canonical number rendering shared by the instance writer and reports:
// integral values print without a decimal point, infinities as "inf".
std::string fmt_num(double v);

} // namespace sbm
