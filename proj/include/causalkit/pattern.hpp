#ifndef CAUSALKIT_PATTERN_HPP
#define CAUSALKIT_PATTERN_HPP

#include <string>
#include <vector>

#include "causalkit/graph.hpp"

namespace causalkit {

// Edge vocabulary of a pattern. A directed link a -> b asserts direct
// causation with no confounder; circle_tail a o-> b allows direct causation,
// a latent common cause, or both; bidirected a <-> b asserts a latent common
// cause only; circle_circle a o-o b allows all five pairwise relations.
enum class LinkMark { directed, circle_tail, bidirected, circle_circle };

struct PatternLink {
    int a = 0;
    int b = 0;
    LinkMark mark = LinkMark::circle_circle;

    bool operator==(const PatternLink&) const = default;
};

// A mixed graph summarizing an equivalence class of latent-variable causal
// structures over the observed variables. At most one link per vertex pair;
// symmetric marks are stored with a < b.
class Pattern {
  public:
    Pattern(std::vector<std::string> names, std::vector<PatternLink> links);

    const std::vector<std::string>& names() const { return names_; }
    int vertex_count() const { return static_cast<int>(names_.size()); }
    const std::vector<PatternLink>& links() const { return links_; }

    bool has_link(int a, int b) const;
    const PatternLink* link_between(int a, int b) const;

    // True iff the link carries an arrowhead pointing into `vertex`.
    static bool arrow_into(const PatternLink& link, int vertex);

    std::string to_dot(const std::string& graph_name = "G") const;

    bool operator==(const Pattern&) const = default;

  private:
    std::vector<std::string> names_;
    std::vector<PatternLink> links_;
};

// A DAG whose vertices split into observed (indices 0..observed_count-1) and
// latent. Latents are exogenous with at least two observed children; in
// pairwise mode exactly two.
class LatentStructure {
  public:
    LatentStructure(Dag base, int observed_count);

    const Dag& dag() const { return dag_; }
    int observed_count() const { return observed_; }
    int latent_count() const { return dag_.vertex_count() - observed_; }
    VarSet observed_set() const { return (VarSet{1} << observed_) - 1; }
    bool is_pairwise() const;

    // Directed edges among observed vertices only.
    std::vector<std::pair<int, int>> observed_edges() const;
    // Children sets of the latents, each sorted, in latent order.
    std::vector<std::vector<int>> latent_children() const;

    // Name-independent identity: observed edges plus the sorted multiset of
    // latent children sets. Two structures equal up to latent renaming have
    // equal keys.
    std::string canonical_key() const;

    std::string to_dot(const std::string& graph_name = "G") const;

  private:
    Dag dag_;
    int observed_;
};

// All combinations of link realizations (directed: 1, circle_tail: 3,
// bidirected: 1, circle_circle: 5), keeping those that do not create a
// v-structure absent from the pattern's own collider set. A collision at c
// is pre-existing exactly when both pattern links at c carry arrowheads into
// c. Latent common causes become fresh vertices L1, L2, ... numbered in link
// order.
std::vector<LatentStructure> expand_pattern(const Pattern& p);

// Drops structures containing a directed observed edge after -> before for
// some (before, after) constraint; latent edges are unaffected.
std::vector<LatentStructure> filter_structures_by_order(
    const std::vector<LatentStructure>& structures,
    const std::vector<std::pair<int, int>>& constraints);

}  // namespace causalkit

#endif  // CAUSALKIT_PATTERN_HPP
