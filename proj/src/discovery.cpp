#include "causalkit/discovery.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

namespace causalkit {

VarSet minimal_parent_set(const CISet& ci, int y, const std::vector<int>& predecessors) {
    const VarSet preds = set_of(predecessors);
    if (contains(preds, y)) throw std::invalid_argument("variable cannot precede itself");

    // Candidate subsets by (size, lexicographic), smallest first.
    std::vector<VarSet> candidates;
    for (VarSet s = 0;; s = (s - preds) & preds) {
        candidates.push_back(s);
        if (s == preds) break;
    }
    std::sort(candidates.begin(), candidates.end(), [](VarSet a, VarSet b) {
        if (set_size(a) != set_size(b)) return set_size(a) < set_size(b);
        return compare_sets(a, b) < 0;
    });
    for (VarSet s : candidates) {
        const VarSet rest = preds & ~s;
        if (rest == 0) return s;  // nothing left to screen off
        if (ci.contains(single(y), rest, s)) return s;
    }
    return preds;
}

std::vector<Dag> wermuth_lauritzen(const CISet& ci, const std::vector<std::string>& variables,
                                   const std::vector<std::pair<int, int>>& order_constraints) {
    if (ci.variables() != variables) {
        throw std::invalid_argument("CI universe must match the variable list");
    }
    const Dag edgeless(variables);
    const auto orderings = edgeless.topological_orderings(order_constraints);

    std::vector<Dag> out;
    std::set<std::vector<std::pair<int, int>>> seen;
    for (const auto& order : orderings) {
        std::vector<std::pair<int, int>> edges;
        std::vector<int> placed;
        for (int v : order) {
            const VarSet parents = minimal_parent_set(ci, v, placed);
            for (int p : set_indices(parents)) edges.emplace_back(p, v);
            placed.push_back(v);
        }
        std::sort(edges.begin(), edges.end());
        if (seen.insert(edges).second) out.emplace_back(variables, edges);
    }
    std::sort(out.begin(), out.end(),
              [](const Dag& a, const Dag& b) { return a.edges() < b.edges(); });
    return out;
}

std::vector<Dag> filter_faithful(const std::vector<Dag>& dags, const CISet& ci) {
    std::vector<Dag> out;
    for (const auto& dag : dags) {
        if (ci.variables() != dag.names()) {
            throw std::invalid_argument("CI universe must match the DAG vertices");
        }
        if (dsep_equals(dag, dag.all_vertices(), ci)) out.push_back(dag);
    }
    return out;
}

namespace {

// All acyclic orientation choices over the observed vertex pairs:
// per pair none / a->b / b->a.
std::vector<std::vector<std::pair<int, int>>> acyclic_edge_sets(int n) {
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
    }
    std::vector<std::vector<std::pair<int, int>>> out;
    std::vector<int> choice(pairs.size(), 0);
    while (true) {
        std::vector<std::pair<int, int>> edges;
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            if (choice[i] == 1) edges.push_back(pairs[i]);
            if (choice[i] == 2) edges.emplace_back(pairs[i].second, pairs[i].first);
        }
        // Cheap cycle check via iterative removal of sinks.
        bool acyclic = true;
        {
            std::vector<int> outdeg(static_cast<std::size_t>(n), 0);
            std::vector<bool> removed(static_cast<std::size_t>(n), false);
            for (const auto& [a, b] : edges) outdeg[static_cast<std::size_t>(a)]++;
            int left = n;
            bool progress = true;
            while (left > 0 && progress) {
                progress = false;
                for (int v = 0; v < n; ++v) {
                    if (removed[static_cast<std::size_t>(v)] ||
                        outdeg[static_cast<std::size_t>(v)] != 0) {
                        continue;
                    }
                    removed[static_cast<std::size_t>(v)] = true;
                    --left;
                    progress = true;
                    for (const auto& [a, b] : edges) {
                        if (b == v && !removed[static_cast<std::size_t>(a)]) {
                            outdeg[static_cast<std::size_t>(a)]--;
                        }
                    }
                }
            }
            acyclic = left == 0;
        }
        if (acyclic) out.push_back(std::move(edges));

        std::size_t pos = 0;
        while (pos < choice.size()) {
            if (++choice[pos] < 3) break;
            choice[pos] = 0;
            ++pos;
        }
        if (pos == choice.size()) break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

std::vector<LatentStructure> enumerate_latent_structures(const CISet& ci,
                                                         const std::vector<std::string>& observed,
                                                         LatentMode mode, int max_latents) {
    const int n = static_cast<int>(observed.size());
    if (n > 4) {
        throw std::invalid_argument("latent structure enumeration is limited to 4 observed variables");
    }
    if (ci.variables() != observed) {
        throw std::invalid_argument("CI universe must match the observed variables");
    }

    // Candidate latent children sets.
    std::vector<VarSet> cause_sets;
    const VarSet all = (VarSet{1} << n) - 1;
    for (VarSet s = all; s != 0; s = (s - 1) & all) {
        const int size = set_size(s);
        if (size < 2) continue;
        if (mode == LatentMode::pairwise && size != 2) continue;
        cause_sets.push_back(s);
    }
    std::sort(cause_sets.begin(), cause_sets.end(),
              [](VarSet a, VarSet b) { return compare_sets(a, b) < 0; });
    if (mode == LatentMode::pairwise && max_latents > static_cast<int>(cause_sets.size())) {
        throw std::invalid_argument("max_latents exceeds the number of vertex pairs");
    }

    const auto edge_sets = acyclic_edge_sets(n);

    std::vector<LatentStructure> out;
    const int k = static_cast<int>(cause_sets.size());
    for (const auto& edges : edge_sets) {
        // Subsets of candidate latents, at most max_latents of them.
        for (VarSet latents = 0; latents < (VarSet{1} << k); ++latents) {
            if (set_size(latents) > max_latents) continue;
            std::vector<std::string> names(observed.begin(), observed.end());
            std::vector<std::pair<int, int>> full_edges = edges;
            int next = 1;
            for (int i : set_indices(latents)) {
                const int latent = static_cast<int>(names.size());
                names.push_back("L" + std::to_string(next++));
                for (int child : set_indices(cause_sets[static_cast<std::size_t>(i)])) {
                    full_edges.emplace_back(latent, child);
                }
            }
            Dag dag(std::move(names), std::move(full_edges));
            if (dsep_equals(dag, (VarSet{1} << n) - 1, ci)) {
                out.emplace_back(std::move(dag), n);
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const LatentStructure& a, const LatentStructure& b) {
        return a.canonical_key() < b.canonical_key();
    });
    return out;
}

namespace {

struct EndMark {
    bool arrow = false;
    bool tail = false;  // definite tail (no confounder arrowhead possible)
};

}  // namespace

std::optional<Pattern> icstar_pattern(const CISet& ci, const std::vector<std::string>& observed) {
    const int n = static_cast<int>(observed.size());
    if (ci.variables() != observed) {
        throw std::invalid_argument("CI universe must match the observed variables");
    }
    const VarSet all = (VarSet{1} << n) - 1;

    // Skeleton: x and y are adjacent iff no conditioning set separates them.
    std::map<std::pair<int, int>, VarSet> sepset;
    std::vector<std::pair<int, int>> skeleton;
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            bool separated = false;
            VarSet found = 0;
            const VarSet rest = all & ~single(a) & ~single(b);
            std::vector<VarSet> zs;
            for (VarSet z = rest;; z = (z - 1) & rest) {
                zs.push_back(z);
                if (z == 0) break;
            }
            std::sort(zs.begin(), zs.end(), [](VarSet l, VarSet r) {
                if (set_size(l) != set_size(r)) return set_size(l) < set_size(r);
                return compare_sets(l, r) < 0;
            });
            for (VarSet z : zs) {
                if (ci.contains(single(a), single(b), z)) {
                    separated = true;
                    found = z;
                    break;
                }
            }
            if (separated) {
                sepset[{a, b}] = found;
            } else {
                skeleton.emplace_back(a, b);
            }
        }
    }

    // Per-edge end marks; default circle at both ends.
    std::map<std::pair<int, int>, std::pair<EndMark, EndMark>> marks;  // key a < b
    for (const auto& e : skeleton) marks[e] = {};

    auto adjacent = [&](int a, int b) {
        return marks.count({std::min(a, b), std::max(a, b)}) != 0;
    };
    auto mark_of = [&](int a, int b) -> EndMark& {
        // Mark at the `a` end of edge {a, b}.
        auto& entry = marks.at({std::min(a, b), std::max(a, b)});
        return a < b ? entry.first : entry.second;
    };

    // Collider orientation: for each unshielded triple a - c - b with c not
    // in sepset(a, b), point both edges into c.
    for (int c = 0; c < n; ++c) {
        for (int a = 0; a < n; ++a) {
            for (int b = a + 1; b < n; ++b) {
                if (a == c || b == c) continue;
                if (!adjacent(a, c) || !adjacent(b, c) || adjacent(a, b)) continue;
                const VarSet z = sepset.at({a, b});
                if (!contains(z, c)) {
                    mark_of(c, a).arrow = true;
                    mark_of(c, b).arrow = true;
                }
            }
        }
    }

    // Mark propagation. Rule 1: a *-> c with c o-o b (or c o-> b), a and b
    // non-adjacent: the c end of (c, b) cannot carry an arrowhead without
    // creating a new collider at c, so the edge becomes the definite directed
    // edge c -> b. Rule 2: a directed path a -> ... -> b plus an edge
    // between a and b forces the arrowhead at b.
    bool changed = true;
    while (changed) {
        changed = false;
        // Rule 1.
        for (int c = 0; c < n; ++c) {
            for (int a = 0; a < n; ++a) {
                if (a == c || !adjacent(a, c) || !mark_of(c, a).arrow) continue;
                for (int b = 0; b < n; ++b) {
                    if (b == c || b == a || !adjacent(c, b) || adjacent(a, b)) continue;
                    EndMark& at_c = mark_of(c, b);
                    EndMark& at_b = mark_of(b, c);
                    if (at_c.arrow) continue;  // collider already oriented at c
                    if (!at_c.tail || !at_b.arrow) {
                        at_c.tail = true;
                        at_b.arrow = true;
                        changed = true;
                    }
                }
            }
        }
        // Rule 2: a -> c -> b (definite directed edges) and an a - b edge
        // gives an arrowhead at b.
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                if (a == b || !adjacent(a, b) || mark_of(b, a).arrow) continue;
                for (int c = 0; c < n; ++c) {
                    if (c == a || c == b || !adjacent(a, c) || !adjacent(c, b)) continue;
                    const bool a_to_c = mark_of(a, c).tail && mark_of(c, a).arrow;
                    const bool c_to_b = mark_of(c, b).tail && mark_of(b, c).arrow;
                    if (a_to_c && c_to_b) {
                        mark_of(b, a).arrow = true;
                        changed = true;
                        break;
                    }
                }
            }
        }
    }

    // Translate end marks into the pattern vocabulary.
    std::vector<PatternLink> links;
    for (const auto& [edge, endmarks] : marks) {
        const auto& [at_a, at_b] = endmarks;
        const int a = edge.first, b = edge.second;
        PatternLink link;
        if (at_a.arrow && at_b.arrow) {
            link = {a, b, LinkMark::bidirected};
        } else if (at_b.arrow) {
            link = at_a.tail ? PatternLink{a, b, LinkMark::directed}
                             : PatternLink{a, b, LinkMark::circle_tail};
        } else if (at_a.arrow) {
            link = at_b.tail ? PatternLink{b, a, LinkMark::directed}
                             : PatternLink{b, a, LinkMark::circle_tail};
        } else {
            link = {a, b, LinkMark::circle_circle};
        }
        links.push_back(link);
    }
    Pattern pattern(observed, links);

    // A pattern is only an answer if some realization is faithful to `ci`.
    const auto expansions = expand_pattern(pattern);
    bool any_faithful = false;
    for (const auto& s : expansions) {
        if (dsep_equals(s.dag(), s.observed_set(), ci)) {
            any_faithful = true;
            break;
        }
    }
    if (!any_faithful) return std::nullopt;
    return pattern;
}

}  // namespace causalkit
