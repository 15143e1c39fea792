#include "causalkit/pattern.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace causalkit {

Pattern::Pattern(std::vector<std::string> names, std::vector<PatternLink> links)
    : names_(std::move(names)) {
    // Reuse the Dag name checks.
    Dag check(names_);
    std::set<std::pair<int, int>> seen;
    for (auto link : links) {
        if (link.a == link.b) throw std::invalid_argument("pattern link relates a vertex to itself");
        if (link.a < 0 || link.b < 0 || link.a >= vertex_count() || link.b >= vertex_count()) {
            throw std::invalid_argument("pattern link vertex out of range");
        }
        const auto key = std::minmax(link.a, link.b);
        if (!seen.insert({key.first, key.second}).second) {
            throw std::invalid_argument("at most one link per vertex pair");
        }
        // Symmetric marks get canonical orientation a < b.
        if ((link.mark == LinkMark::bidirected || link.mark == LinkMark::circle_circle) &&
            link.a > link.b) {
            std::swap(link.a, link.b);
        }
        links_.push_back(link);
    }
    std::sort(links_.begin(), links_.end(), [](const PatternLink& l, const PatternLink& r) {
        const auto lk = std::minmax(l.a, l.b);
        const auto rk = std::minmax(r.a, r.b);
        return lk < rk;
    });
}

bool Pattern::has_link(int a, int b) const { return link_between(a, b) != nullptr; }

const PatternLink* Pattern::link_between(int a, int b) const {
    for (const auto& link : links_) {
        if ((link.a == a && link.b == b) || (link.a == b && link.b == a)) return &link;
    }
    return nullptr;
}

bool Pattern::arrow_into(const PatternLink& link, int vertex) {
    switch (link.mark) {
        case LinkMark::directed:
        case LinkMark::circle_tail:
            return vertex == link.b;
        case LinkMark::bidirected:
            return vertex == link.a || vertex == link.b;
        case LinkMark::circle_circle:
            return false;
    }
    return false;
}

std::string Pattern::to_dot(const std::string& graph_name) const {
    std::ostringstream os;
    os << "digraph " << graph_name << " {\n";
    for (const auto& name : names_) os << "  \"" << name << "\";\n";
    for (const auto& link : links_) {
        os << "  \"" << names_[static_cast<std::size_t>(link.a)] << "\" -> \""
           << names_[static_cast<std::size_t>(link.b)] << "\"";
        switch (link.mark) {
            case LinkMark::directed:
                break;
            case LinkMark::circle_tail:
                os << " [dir=both, arrowtail=odot]";
                break;
            case LinkMark::bidirected:
                os << " [dir=both]";
                break;
            case LinkMark::circle_circle:
                os << " [dir=both, arrowtail=odot, arrowhead=odot]";
                break;
        }
        os << ";\n";
    }
    os << "}\n";
    return os.str();
}

LatentStructure::LatentStructure(Dag base, int observed_count)
    : dag_(std::move(base)), observed_(observed_count) {
    if (observed_ < 1 || observed_ > dag_.vertex_count()) {
        throw std::invalid_argument("observed count out of range");
    }
    for (int v = observed_; v < dag_.vertex_count(); ++v) {
        if (dag_.parent_set(v) != 0) {
            throw std::invalid_argument("latent vertices must be exogenous");
        }
        const VarSet children = dag_.child_set(v);
        if (set_size(children) < 2) {
            throw std::invalid_argument("latent vertices need at least two children");
        }
        if (!is_subset(children, observed_set())) {
            throw std::invalid_argument("latent children must be observed");
        }
    }
}

bool LatentStructure::is_pairwise() const {
    for (int v = observed_; v < dag_.vertex_count(); ++v) {
        if (set_size(dag_.child_set(v)) != 2) return false;
    }
    return true;
}

std::vector<std::pair<int, int>> LatentStructure::observed_edges() const {
    std::vector<std::pair<int, int>> out;
    for (const auto& [parent, child] : dag_.edges()) {
        if (parent < observed_ && child < observed_) out.emplace_back(parent, child);
    }
    return out;
}

std::vector<std::vector<int>> LatentStructure::latent_children() const {
    std::vector<std::vector<int>> out;
    for (int v = observed_; v < dag_.vertex_count(); ++v) {
        out.push_back(set_indices(dag_.child_set(v)));
    }
    return out;
}

std::string LatentStructure::canonical_key() const {
    std::ostringstream os;
    os << "edges:";
    for (const auto& [parent, child] : observed_edges()) os << parent << ">" << child << ";";
    auto children = latent_children();
    std::sort(children.begin(), children.end());
    os << "latents:";
    for (const auto& set : children) {
        for (int c : set) os << c << ",";
        os << ";";
    }
    return os.str();
}

std::string LatentStructure::to_dot(const std::string& graph_name) const {
    std::ostringstream os;
    os << "digraph " << graph_name << " {\n";
    for (int v = 0; v < dag_.vertex_count(); ++v) {
        os << "  \"" << dag_.name(v) << "\"";
        if (v >= observed_) os << " [style=dashed]";
        os << ";\n";
    }
    for (const auto& [parent, child] : dag_.edges()) {
        os << "  \"" << dag_.name(parent) << "\" -> \"" << dag_.name(child) << "\";\n";
    }
    os << "}\n";
    return os.str();
}

namespace {

// One realization of a pattern link: directed observed edges plus an
// optional confounder between the endpoints.
struct Realization {
    bool forward = false;   // a -> b
    bool backward = false;  // b -> a
    bool confounder = false;
};

std::vector<Realization> realizations_of(const PatternLink& link) {
    switch (link.mark) {
        case LinkMark::directed:
            return {{true, false, false}};
        case LinkMark::circle_tail:
            // Direct cause, common cause, or both.
            return {{true, false, false}, {false, false, true}, {true, false, true}};
        case LinkMark::bidirected:
            return {{false, false, true}};
        case LinkMark::circle_circle:
            return {{true, false, false},
                    {false, true, false},
                    {false, false, true},
                    {true, false, true},
                    {false, true, true}};
    }
    return {};
}

}  // namespace

std::vector<LatentStructure> expand_pattern(const Pattern& p) {
    const int n = p.vertex_count();
    const auto& links = p.links();
    const int link_count = static_cast<int>(links.size());

    // Pre-existing collisions: vertex c with two links both carrying pattern
    // arrowheads into c.
    std::set<std::pair<std::pair<int, int>, int>> preexisting;  // ((link i, link j), c), i < j
    for (int i = 0; i < link_count; ++i) {
        for (int j = i + 1; j < link_count; ++j) {
            for (int c = 0; c < n; ++c) {
                const bool i_at_c = links[static_cast<std::size_t>(i)].a == c ||
                                    links[static_cast<std::size_t>(i)].b == c;
                const bool j_at_c = links[static_cast<std::size_t>(j)].a == c ||
                                    links[static_cast<std::size_t>(j)].b == c;
                if (!i_at_c || !j_at_c) continue;
                if (Pattern::arrow_into(links[static_cast<std::size_t>(i)], c) &&
                    Pattern::arrow_into(links[static_cast<std::size_t>(j)], c)) {
                    preexisting.insert({{i, j}, c});
                }
            }
        }
    }

    std::vector<std::vector<Realization>> options;
    options.reserve(links.size());
    for (const auto& link : links) options.push_back(realizations_of(link));

    std::vector<LatentStructure> out;
    std::vector<std::size_t> choice(links.size(), 0);
    while (true) {
        // Realized arrowheads into each observed vertex, per link.
        // adjacency over observed vertices for the v-structure test.
        std::vector<std::pair<int, int>> observed_edges;
        std::vector<int> confounded_links;
        for (int i = 0; i < link_count; ++i) {
            const auto& link = links[static_cast<std::size_t>(i)];
            const auto& real = options[static_cast<std::size_t>(i)][choice[static_cast<std::size_t>(i)]];
            if (real.forward) observed_edges.emplace_back(link.a, link.b);
            if (real.backward) observed_edges.emplace_back(link.b, link.a);
            if (real.confounder) confounded_links.push_back(i);
        }

        auto observed_adjacent = [&](int a, int b) {
            for (const auto& [s, t] : observed_edges) {
                if ((s == a && t == b) || (s == b && t == a)) return true;
            }
            return false;
        };
        // Arrow into c contributed by link i under the current choice; the
        // source is the far observed endpoint for a direct edge, or the
        // link's latent for a confounder.
        struct Arrow {
            int link;
            int source;        // observed endpoint, or -1 - link for a latent
            bool from_latent;
        };
        auto arrows_into = [&](int c) {
            std::vector<Arrow> arrows;
            for (int i = 0; i < link_count; ++i) {
                const auto& link = links[static_cast<std::size_t>(i)];
                if (link.a != c && link.b != c) continue;
                const int far = link.a == c ? link.b : link.a;
                const auto& real =
                    options[static_cast<std::size_t>(i)][choice[static_cast<std::size_t>(i)]];
                const bool direct_in =
                    (real.forward && link.b == c) || (real.backward && link.a == c);
                if (direct_in) arrows.push_back({i, far, false});
                if (real.confounder) arrows.push_back({i, -1 - i, true});
            }
            return arrows;
        };

        bool creates_new_vstructure = false;
        for (int c = 0; c < n && !creates_new_vstructure; ++c) {
            const auto arrows = arrows_into(c);
            for (std::size_t i = 0; i < arrows.size() && !creates_new_vstructure; ++i) {
                for (std::size_t j = i + 1; j < arrows.size(); ++j) {
                    const Arrow& p1 = arrows[i];
                    const Arrow& p2 = arrows[j];
                    if (p1.link == p2.link) continue;  // same-link sources are adjacent
                    // Adjacency of the two sources in the realized graph: a
                    // latent is adjacent only to its own link's endpoints.
                    bool adjacent;
                    if (p1.from_latent || p2.from_latent) {
                        // Latent from link i is adjacent to links[i].a/b only;
                        // the other source is an endpoint of a different link,
                        // so they can only coincide at c itself. Two latents
                        // are never adjacent.
                        if (p1.from_latent && p2.from_latent) {
                            adjacent = false;
                        } else {
                            const Arrow& latent = p1.from_latent ? p1 : p2;
                            const Arrow& other = p1.from_latent ? p2 : p1;
                            const auto& llink = links[static_cast<std::size_t>(latent.link)];
                            adjacent = other.source == llink.a || other.source == llink.b;
                        }
                    } else {
                        adjacent = observed_adjacent(p1.source, p2.source);
                    }
                    if (adjacent) continue;
                    const auto key = std::minmax(p1.link, p2.link);
                    if (preexisting.count({{key.first, key.second}, c}) == 0) {
                        creates_new_vstructure = true;
                        break;
                    }
                }
            }
        }

        // Realized direct edges may close a directed cycle (complete
        // skeletons allow it); such combinations are not causal structures.
        bool acyclic = true;
        {
            std::vector<int> outdeg(static_cast<std::size_t>(n), 0);
            std::vector<bool> removed(static_cast<std::size_t>(n), false);
            for (const auto& [a, b] : observed_edges) outdeg[static_cast<std::size_t>(a)]++;
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
                    for (const auto& [a, b] : observed_edges) {
                        if (b == v && !removed[static_cast<std::size_t>(a)]) {
                            outdeg[static_cast<std::size_t>(a)]--;
                        }
                    }
                }
            }
            acyclic = left == 0;
        }

        if (acyclic && !creates_new_vstructure) {
            std::vector<std::string> names = p.names();
            std::vector<std::pair<int, int>> edges = observed_edges;
            int next_latent = 1;
            for (int i : confounded_links) {
                const auto& link = links[static_cast<std::size_t>(i)];
                const int latent = static_cast<int>(names.size());
                names.push_back("L" + std::to_string(next_latent++));
                edges.emplace_back(latent, link.a);
                edges.emplace_back(latent, link.b);
            }
            out.emplace_back(Dag(std::move(names), std::move(edges)), n);
        }

        // Next combination, mixed radix over the links.
        std::size_t pos = 0;
        while (pos < choice.size()) {
            if (++choice[pos] < options[pos].size()) break;
            choice[pos] = 0;
            ++pos;
        }
        if (pos == choice.size()) break;
    }
    return out;
}

std::vector<LatentStructure> filter_structures_by_order(
    const std::vector<LatentStructure>& structures,
    const std::vector<std::pair<int, int>>& constraints) {
    std::vector<LatentStructure> out;
    for (const auto& s : structures) {
        bool ok = true;
        for (const auto& [before, after] : constraints) {
            if (s.dag().has_edge(after, before)) {
                ok = false;
                break;
            }
        }
        if (ok) out.push_back(s);
    }
    return out;
}

}  // namespace causalkit
