#ifndef CAUSALKIT_CI_HPP
#define CAUSALKIT_CI_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "causalkit/graph.hpp"
#include "causalkit/varset.hpp"

namespace causalkit {

// A conditional-independence assertion (X indep Y given Z) over disjoint
// variable sets; Z may be empty (marginal independence). Stored in canonical
// form with X <= Y, so the symmetric pair is a single statement.
struct CIStatement {
    VarSet x = 0;
    VarSet y = 0;
    VarSet z = 0;

    // Canonicalizes and validates; throws on empty or overlapping sets.
    static CIStatement make(VarSet x, VarSet y, VarSet z);

    bool operator==(const CIStatement& other) const {
        return x == other.x && y == other.y && z == other.z;
    }
    bool operator<(const CIStatement& other) const;

    std::string to_string(const std::vector<std::string>& names) const;
};

// A canonical set of CI statements over a fixed, ordered variable universe.
class CISet {
  public:
    explicit CISet(std::vector<std::string> variables);

    const std::vector<std::string>& variables() const { return vars_; }
    int variable_count() const { return static_cast<int>(vars_.size()); }
    int index_of(const std::string& name) const;
    VarSet universe() const { return (VarSet{1} << variable_count()) - 1; }

    // Inserts the canonical form; returns false if already present.
    bool insert(const CIStatement& s);
    bool insert(VarSet x, VarSet y, VarSet z) { return insert(CIStatement::make(x, y, z)); }
    bool contains(const CIStatement& s) const { return stmts_.count(s) != 0; }
    bool contains(VarSet x, VarSet y, VarSet z) const {
        return contains(CIStatement::make(x, y, z));
    }

    std::size_t size() const { return stmts_.size(); }
    bool empty() const { return stmts_.empty(); }
    auto begin() const { return stmts_.begin(); }
    auto end() const { return stmts_.end(); }

    bool operator==(const CISet& other) const {
        return vars_ == other.vars_ && stmts_ == other.stmts_;
    }

    std::string to_string() const;

  private:
    std::vector<std::string> vars_;
    std::set<CIStatement> stmts_;
};

// Least fixed point of the input under Symmetry, Decomposition, Weak Union
// and Contraction, with every axiom variable ranging over sets. Terminates
// because the statement universe over a finite variable set is finite.
CISet semigraphoid_closure(const CISet& generators);

// Convenience: closure(g) == target.
bool is_generated_by(const CISet& generators, const CISet& target);

// Causal Markov condition: one statement per vertex whose nondescendants
// minus parents are nonempty, (v indep Nd(v) \ Pa(v) | Pa(v)).
CISet markov_ci(const Dag& dag);

// Every CI statement over disjoint subsets of `observed` (given as vertex
// indices of `dag`) that holds by d-separation in the full graph. Statement
// indices are re-based to the observed variables in dag vertex order.
CISet dsep_ci_set(const Dag& dag, VarSet observed);

// True iff dsep_ci_set(dag, observed) == target, evaluated with early exit
// on the first disagreeing triple. The target universe must list exactly the
// observed variables in dag vertex order.
bool dsep_equals(const Dag& dag, VarSet observed, const CISet& target);


}  // namespace causalkit

#endif  // CAUSALKIT_CI_HPP
