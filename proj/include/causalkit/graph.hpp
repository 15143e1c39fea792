#ifndef CAUSALKIT_GRAPH_HPP
#define CAUSALKIT_GRAPH_HPP

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "causalkit/varset.hpp"

namespace causalkit {

// Directed acyclic graph over named variables. Immutable after construction;
// acyclicity and name uniqueness are checked by the constructor.
class Dag {
  public:
    // Vertices are indexed 0..n-1 in the order of `names`. Edges are
    // (parent, child) index pairs.
    Dag(std::vector<std::string> names, std::vector<std::pair<int, int>> edges = {});

    static Dag from_edge_names(std::vector<std::string> names,
                               const std::vector<std::pair<std::string, std::string>>& edges);

    int vertex_count() const { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& names() const { return names_; }
    const std::string& name(int v) const { return names_.at(static_cast<std::size_t>(v)); }
    int index_of(const std::string& name) const;  // throws on unknown name

    bool has_edge(int parent, int child) const;
    bool adjacent(int a, int b) const { return has_edge(a, b) || has_edge(b, a); }

    // Canonical edge list, sorted by (parent, child).
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

    VarSet parent_set(int v) const;
    VarSet child_set(int v) const;
    VarSet descendant_set(int v) const;     // excludes v
    VarSet nondescendant_set(int v) const;  // all vertices minus descendants minus v
    VarSet all_vertices() const { return (VarSet{1} << vertex_count()) - 1; }

    struct Relatives {
        VarSet parents;
        VarSet descendants;
        VarSet nondescendants;
    };
    Relatives relatives(int v) const;

    // All total orders consistent with the edges and the extra (before, after)
    // precedence constraints, in lexicographic order by vertex index.
    // Throws if the combined precedence relation is cyclic.
    std::vector<std::vector<int>> topological_orderings(
        const std::vector<std::pair<int, int>>& constraints = {}) const;

    // True iff Z blocks every undirected path between X and Y. A path is
    // blocked when some interior vertex is a chain or fork node in Z, or a
    // collider that is outside Z with no descendant in Z.
    // X and Y must be nonempty and X, Y, Z pairwise disjoint.
    bool d_separated(VarSet x, VarSet y, VarSet z) const;

    // Triples (p1, c, p2) with p1 -> c <- p2, p1 < p2, and p1, p2 non-adjacent.
    std::vector<std::array<int, 3>> v_structures() const;

    std::string to_dot(const std::string& graph_name = "G") const;

    bool operator==(const Dag& other) const {
        return names_ == other.names_ && edges_ == other.edges_;
    }

  private:
    void check_vertex(int v) const;

    std::vector<std::string> names_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<VarSet> parents_;
    std::vector<VarSet> children_;
    std::vector<VarSet> descendants_;
};

}  // namespace causalkit

#endif  // CAUSALKIT_GRAPH_HPP
