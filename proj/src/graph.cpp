#include "causalkit/graph.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace causalkit {

Dag::Dag(std::vector<std::string> names, std::vector<std::pair<int, int>> edges)
    : names_(std::move(names)) {
    const int n = vertex_count();
    if (n > kMaxVars) throw std::invalid_argument("too many vertices");
    std::set<std::string> seen;
    for (const auto& name : names_) {
        if (name.empty() || !seen.insert(name).second) {
            throw std::invalid_argument("vertex names must be unique and nonempty");
        }
    }
    parents_.assign(static_cast<std::size_t>(n), 0);
    children_.assign(static_cast<std::size_t>(n), 0);

    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    for (const auto& [parent, child] : edges) {
        check_vertex(parent);
        check_vertex(child);
        if (parent == child) throw std::invalid_argument("self-loop on " + name(parent));
        parents_[static_cast<std::size_t>(child)] |= single(parent);
        children_[static_cast<std::size_t>(parent)] |= single(child);
    }
    edges_ = std::move(edges);

    // Descendant closure, vertices processed in reverse topological order.
    descendants_.assign(static_cast<std::size_t>(n), 0);
    std::vector<int> state(static_cast<std::size_t>(n), 0);  // 0 new, 1 open, 2 done
    std::function<void(int)> visit = [&](int v) {
        if (state[static_cast<std::size_t>(v)] == 2) return;
        if (state[static_cast<std::size_t>(v)] == 1) {
            throw std::invalid_argument("edge set contains a directed cycle");
        }
        state[static_cast<std::size_t>(v)] = 1;
        VarSet desc = 0;
        for (int c : set_indices(children_[static_cast<std::size_t>(v)])) {
            visit(c);
            desc |= single(c) | descendants_[static_cast<std::size_t>(c)];
        }
        descendants_[static_cast<std::size_t>(v)] = desc;
        state[static_cast<std::size_t>(v)] = 2;
    };
    for (int v = 0; v < n; ++v) visit(v);
}

Dag Dag::from_edge_names(std::vector<std::string> names,
                         const std::vector<std::pair<std::string, std::string>>& edges) {
    Dag lookup(names);
    std::vector<std::pair<int, int>> indexed;
    indexed.reserve(edges.size());
    for (const auto& [parent, child] : edges) {
        indexed.emplace_back(lookup.index_of(parent), lookup.index_of(child));
    }
    return Dag(std::move(names), std::move(indexed));
}

int Dag::index_of(const std::string& name) const {
    for (int v = 0; v < vertex_count(); ++v) {
        if (names_[static_cast<std::size_t>(v)] == name) return v;
    }
    throw std::invalid_argument("unknown vertex '" + name + "'");
}

void Dag::check_vertex(int v) const {
    if (v < 0 || v >= vertex_count()) throw std::invalid_argument("unknown vertex index");
}

bool Dag::has_edge(int parent, int child) const {
    check_vertex(parent);
    check_vertex(child);
    return contains(children_[static_cast<std::size_t>(parent)], child);
}

VarSet Dag::parent_set(int v) const {
    check_vertex(v);
    return parents_[static_cast<std::size_t>(v)];
}

VarSet Dag::child_set(int v) const {
    check_vertex(v);
    return children_[static_cast<std::size_t>(v)];
}

VarSet Dag::descendant_set(int v) const {
    check_vertex(v);
    return descendants_[static_cast<std::size_t>(v)];
}

VarSet Dag::nondescendant_set(int v) const {
    check_vertex(v);
    return all_vertices() & ~descendants_[static_cast<std::size_t>(v)] & ~single(v);
}

Dag::Relatives Dag::relatives(int v) const {
    return Relatives{parent_set(v), descendant_set(v), nondescendant_set(v)};
}

std::vector<std::vector<int>> Dag::topological_orderings(
    const std::vector<std::pair<int, int>>& constraints) const {
    const int n = vertex_count();
    std::vector<VarSet> must_precede(static_cast<std::size_t>(n), 0);
    for (int v = 0; v < n; ++v) must_precede[static_cast<std::size_t>(v)] = parent_set(v);
    for (const auto& [before, after] : constraints) {
        check_vertex(before);
        check_vertex(after);
        if (before == after) throw std::invalid_argument("constraint relates a vertex to itself");
        must_precede[static_cast<std::size_t>(after)] |= single(before);
    }

    // Reject contradictory constraints up front: the combined precedence
    // relation must itself be acyclic.
    {
        std::vector<int> state(static_cast<std::size_t>(n), 0);
        std::function<void(int)> visit = [&](int v) {
            if (state[static_cast<std::size_t>(v)] == 2) return;
            if (state[static_cast<std::size_t>(v)] == 1) {
                throw std::invalid_argument("contradictory ordering constraints");
            }
            state[static_cast<std::size_t>(v)] = 1;
            for (int p : set_indices(must_precede[static_cast<std::size_t>(v)])) visit(p);
            state[static_cast<std::size_t>(v)] = 2;
        };
        for (int v = 0; v < n; ++v) visit(v);
    }

    std::vector<std::vector<int>> orderings;
    std::vector<int> current;
    current.reserve(static_cast<std::size_t>(n));
    VarSet placed = 0;
    std::function<void()> extend = [&]() {
        if (static_cast<int>(current.size()) == n) {
            orderings.push_back(current);
            return;
        }
        for (int v = 0; v < n; ++v) {
            if (contains(placed, v)) continue;
            if (!is_subset(must_precede[static_cast<std::size_t>(v)], placed)) continue;
            current.push_back(v);
            placed |= single(v);
            extend();
            placed &= ~single(v);
            current.pop_back();
        }
    };
    extend();
    return orderings;
}

bool Dag::d_separated(VarSet x, VarSet y, VarSet z) const {
    if (x == 0 || y == 0) throw std::invalid_argument("d-separation requires nonempty X and Y");
    if ((x & y) != 0 || (x & z) != 0 || (y & z) != 0) {
        throw std::invalid_argument("d-separation requires pairwise disjoint X, Y, Z");
    }
    if (!is_subset(x | y | z, all_vertices())) throw std::invalid_argument("unknown vertex index");

    // A collider on a path is passable iff it or one of its descendants is
    // conditioned on.
    std::vector<bool> collider_open(static_cast<std::size_t>(vertex_count()));
    for (int v = 0; v < vertex_count(); ++v) {
        collider_open[static_cast<std::size_t>(v)] =
            contains(z, v) || (descendant_set(v) & z) != 0;
    }

    // Depth-first enumeration of simple undirected paths from x to y, keeping
    // the direction of the edge used to enter the current vertex. Stops at
    // the first open path. Paths through interior X vertices are skipped:
    // any open path of that kind has an open suffix starting at the later
    // X vertex, so nothing is lost.
    for (int sx : set_indices(x)) {
        std::vector<bool> on_path(static_cast<std::size_t>(vertex_count()), false);
        // entered_via_arrow: the edge used to reach `v` points into v.
        std::function<bool(int, bool)> dfs = [&](int v, bool entered_via_arrow) -> bool {
            if (contains(y, v)) return true;
            on_path[static_cast<std::size_t>(v)] = true;
            bool open = false;
            for (int next = 0; next < vertex_count() && !open; ++next) {
                if (on_path[static_cast<std::size_t>(next)] || contains(x, next)) continue;
                if (has_edge(v, next)) {
                    // v is a chain or fork node on this continuation.
                    if (!contains(z, v)) open = dfs(next, true);
                } else if (has_edge(next, v)) {
                    const bool is_collider = entered_via_arrow;
                    const bool passable = is_collider ? collider_open[static_cast<std::size_t>(v)]
                                                      : !contains(z, v);
                    if (passable) open = dfs(next, false);
                }
            }
            on_path[static_cast<std::size_t>(v)] = false;
            return open;
        };
        // The start vertex is never a blocking candidate: expand its edges
        // directly.
        on_path[static_cast<std::size_t>(sx)] = true;
        for (int next = 0; next < vertex_count(); ++next) {
            if (next == sx || contains(x, next)) continue;
            if (has_edge(sx, next)) {
                if (dfs(next, true)) return false;
            } else if (has_edge(next, sx)) {
                if (dfs(next, false)) return false;
            }
        }
    }
    return true;
}

std::vector<std::array<int, 3>> Dag::v_structures() const {
    std::vector<std::array<int, 3>> out;
    for (int c = 0; c < vertex_count(); ++c) {
        const auto parents = set_indices(parent_set(c));
        for (std::size_t i = 0; i < parents.size(); ++i) {
            for (std::size_t j = i + 1; j < parents.size(); ++j) {
                if (!adjacent(parents[i], parents[j])) {
                    out.push_back({parents[i], c, parents[j]});
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string Dag::to_dot(const std::string& graph_name) const {
    std::ostringstream os;
    os << "digraph " << graph_name << " {\n";
    for (int v = 0; v < vertex_count(); ++v) {
        os << "  \"" << name(v) << "\";\n";
    }
    for (const auto& [parent, child] : edges_) {
        os << "  \"" << name(parent) << "\" -> \"" << name(child) << "\";\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace causalkit
