#include "causalkit/ci.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace causalkit {

CIStatement CIStatement::make(VarSet x, VarSet y, VarSet z) {
    if (x == 0 || y == 0) throw std::invalid_argument("CI statement requires nonempty X and Y");
    if ((x & y) != 0 || (x & z) != 0 || (y & z) != 0) {
        throw std::invalid_argument("CI statement requires pairwise disjoint X, Y, Z");
    }
    if (compare_sets(x, y) > 0) std::swap(x, y);
    return CIStatement{x, y, z};
}

bool CIStatement::operator<(const CIStatement& other) const {
    if (int c = compare_sets(x, other.x); c != 0) return c < 0;
    if (int c = compare_sets(y, other.y); c != 0) return c < 0;
    return compare_sets(z, other.z) < 0;
}

std::string CIStatement::to_string(const std::vector<std::string>& names) const {
    std::string out = "(" + set_names(x, names) + " _||_ " + set_names(y, names);
    if (z != 0) out += " | " + set_names(z, names);
    out += ")";
    return out;
}

CISet::CISet(std::vector<std::string> variables) : vars_(std::move(variables)) {
    if (static_cast<int>(vars_.size()) > kMaxVars) {
        throw std::invalid_argument("too many variables in CI universe");
    }
}

int CISet::index_of(const std::string& name) const {
    for (int i = 0; i < variable_count(); ++i) {
        if (vars_[static_cast<std::size_t>(i)] == name) return i;
    }
    throw std::invalid_argument("unknown variable '" + name + "' in CI universe");
}

bool CISet::insert(const CIStatement& s) {
    if (!is_subset(s.x | s.y | s.z, universe())) {
        throw std::invalid_argument("CI statement outside the declared universe");
    }
    return stmts_.insert(s).second;
}

std::string CISet::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& s : stmts_) {
        if (!first) os << "\n";
        os << s.to_string(vars_);
        first = false;
    }
    if (stmts_.empty()) os << "(no independences)";
    return os.str();
}

namespace {

// Enumerates nonempty proper-and-improper subsets of `set`.
std::vector<VarSet> nonempty_subsets(VarSet set) {
    std::vector<VarSet> out;
    for (VarSet s = set; s != 0; s = (s - 1) & set) out.push_back(s);
    return out;
}

}  // namespace

CISet semigraphoid_closure(const CISet& generators) {
    CISet closed(generators.variables());
    std::deque<CIStatement> queue;
    auto add = [&](VarSet x, VarSet y, VarSet z) {
        const auto s = CIStatement::make(x, y, z);
        if (closed.insert(s)) queue.push_back(s);
    };
    for (const auto& s : generators) add(s.x, s.y, s.z);

    std::vector<CIStatement> known(closed.begin(), closed.end());
    while (!queue.empty()) {
        const CIStatement s = queue.front();
        queue.pop_front();

        // Decomposition and weak union in one pass: from (X indep Y | Z),
        // for any nonempty Y' subset of Y and any W subset of Y \ Y',
        // (X indep Y' | Z W) follows. Applied to both sides via symmetry.
        const std::pair<VarSet, VarSet> sides[2] = {{s.x, s.y}, {s.y, s.x}};
        for (const auto& [x, y] : sides) {
            for (VarSet ysub : nonempty_subsets(y)) {
                const VarSet rest = y & ~ysub;
                for (VarSet w = rest;; w = (w - 1) & rest) {
                    add(x, ysub, s.z | w);
                    if (w == 0) break;
                }
            }
        }

        // Contraction: (X indep Y | Z) and (X indep W | Z Y) give
        // (X indep Y W | Z). Pair the dequeued statement with everything
        // known so far, in both roles and both orientations.
        known.assign(closed.begin(), closed.end());
        for (const auto& t : known) {
            const std::pair<VarSet, VarSet> s_sides[2] = {{s.x, s.y}, {s.y, s.x}};
            const std::pair<VarSet, VarSet> t_sides[2] = {{t.x, t.y}, {t.y, t.x}};
            for (const auto& [sx, sy] : s_sides) {
                for (const auto& [tx, ty] : t_sides) {
                    // s as the first premise, t as the second.
                    if (sx == tx && t.z == (s.z | sy) && (ty & (s.z | sy)) == 0) {
                        add(sx, sy | ty, s.z);
                    }
                    // t as the first premise, s as the second.
                    if (tx == sx && s.z == (t.z | ty) && (sy & (t.z | ty)) == 0) {
                        add(tx, ty | sy, t.z);
                    }
                }
            }
        }
    }
    return closed;
}

bool is_generated_by(const CISet& generators, const CISet& target) {
    return semigraphoid_closure(generators) == target;
}

CISet markov_ci(const Dag& dag) {
    CISet out(dag.names());
    for (int v = 0; v < dag.vertex_count(); ++v) {
        const VarSet parents = dag.parent_set(v);
        const VarSet rest = dag.nondescendant_set(v) & ~parents;
        if (rest != 0) out.insert(single(v), rest, parents);
    }
    return out;
}

CISet dsep_ci_set(const Dag& dag, VarSet observed) {
    if (!is_subset(observed, dag.all_vertices())) {
        throw std::invalid_argument("observed set contains unknown vertices");
    }
    const auto obs = set_indices(observed);
    const int n = static_cast<int>(obs.size());
    std::vector<std::string> names;
    names.reserve(obs.size());
    for (int v : obs) names.push_back(dag.name(v));
    CISet out(names);

    // Assign each observed variable to one of X, Y, Z, or outside; keep the
    // canonical representative of each symmetric (X, Y) pair.
    std::vector<int> role(static_cast<std::size_t>(n), 0);
    std::function<void(int)> assign = [&](int pos) {
        if (pos == n) {
            VarSet x = 0, y = 0, z = 0;        // in dag indices
            VarSet xo = 0, yo = 0, zo = 0;     // in observed-relative indices
            for (int i = 0; i < n; ++i) {
                switch (role[static_cast<std::size_t>(i)]) {
                    case 1: x |= single(obs[static_cast<std::size_t>(i)]); xo |= single(i); break;
                    case 2: y |= single(obs[static_cast<std::size_t>(i)]); yo |= single(i); break;
                    case 3: z |= single(obs[static_cast<std::size_t>(i)]); zo |= single(i); break;
                    default: break;
                }
            }
            if (x == 0 || y == 0) return;
            if (compare_sets(xo, yo) > 0) return;  // symmetric duplicate
            if (dag.d_separated(x, y, z)) out.insert(xo, yo, zo);
            return;
        }
        for (int r = 0; r < 4; ++r) {
            role[static_cast<std::size_t>(pos)] = r;
            assign(pos + 1);
        }
    };
    assign(0);
    return out;
}

namespace {

struct Triple {
    VarSet x, y, z;  // observed-relative indices, canonical x <= y
};

// All canonical (X, Y, Z) role assignments over n observed variables, cheap
// and discriminating triples first. Depends only on n, so cached.
const std::vector<Triple>& canonical_triples(int n) {
    static std::map<int, std::vector<Triple>> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<Triple> triples;
    std::function<void(int, VarSet, VarSet, VarSet)> assign = [&](int pos, VarSet x, VarSet y,
                                                                  VarSet z) {
        if (pos == n) {
            if (x == 0 || y == 0) return;
            if (compare_sets(x, y) > 0) return;
            triples.push_back(Triple{x, y, z});
            return;
        }
        const VarSet bit = single(pos);
        assign(pos + 1, x, y, z);
        assign(pos + 1, x | bit, y, z);
        assign(pos + 1, x, y | bit, z);
        assign(pos + 1, x, y, z | bit);
    };
    assign(0, 0, 0, 0);
    std::stable_sort(triples.begin(), triples.end(), [](const Triple& a, const Triple& b) {
        return set_size(a.x | a.y | a.z) < set_size(b.x | b.y | b.z);
    });
    return cache.emplace(n, std::move(triples)).first->second;
}

}  // namespace

bool dsep_equals(const Dag& dag, VarSet observed, const CISet& target) {
    const auto obs = set_indices(observed);
    const int n = static_cast<int>(obs.size());
    if (target.variable_count() != n) {
        throw std::invalid_argument("target CI universe does not match observed set");
    }
    for (const auto& t : canonical_triples(n)) {
        VarSet x = 0, y = 0, z = 0;
        for (int i : set_indices(t.x)) x |= single(obs[static_cast<std::size_t>(i)]);
        for (int i : set_indices(t.y)) y |= single(obs[static_cast<std::size_t>(i)]);
        for (int i : set_indices(t.z)) z |= single(obs[static_cast<std::size_t>(i)]);
        const bool separated = dag.d_separated(x, y, z);
        if (separated != target.contains(t.x, t.y, t.z)) return false;
    }
    return true;
}

}  // namespace causalkit
