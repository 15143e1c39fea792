#ifndef CAUSALKIT_DISTRIBUTION_HPP
#define CAUSALKIT_DISTRIBUTION_HPP

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "causalkit/ci.hpp"
#include "causalkit/rational.hpp"
#include "causalkit/varset.hpp"

namespace causalkit {

struct Variable {
    std::string name;
    int cardinality = 2;
    bool operator==(const Variable&) const = default;
};

enum class NumericMode { exact, floating };

enum class CiScope { singleton_pairs, full_sets };

// Exact or floating probability table over an ordered variable set. Cells are
// indexed row-major with the first variable most significant. Immutable.
class JointDistribution {
  public:
    static JointDistribution exact(std::vector<Variable> vars, std::vector<Rational> probs);
    static JointDistribution floating(std::vector<Variable> vars, std::vector<double> probs,
                                      double tolerance = 1e-9);

    NumericMode mode() const {
        return std::holds_alternative<std::vector<Rational>>(probs_) ? NumericMode::exact
                                                                     : NumericMode::floating;
    }
    double tolerance() const { return tol_; }

    const std::vector<Variable>& variables() const { return vars_; }
    int variable_count() const { return static_cast<int>(vars_.size()); }
    int index_of(const std::string& name) const;
    std::vector<std::string> variable_names() const;

    std::size_t cell_count() const;
    std::size_t cell_index(const std::vector<int>& assignment) const;
    std::vector<int> assignment_of(std::size_t cell) const;

    // Cell probability as a rational; throws in floating mode.
    const Rational& exact_prob(std::size_t cell) const;
    // Cell probability as a double; exact in rational mode is converted.
    double prob(std::size_t cell) const;

    // Sums out every variable not in `keep`; variable order is preserved.
    // Throws if keep is empty or not a subset of the variables.
    JointDistribution marginalize(VarSet keep) const;
    JointDistribution marginalize(const std::vector<std::string>& keep) const;

    // Conditions on variable = value pairs and renormalizes over the rest.
    // Zero-probability evidence is an error, never a silent NaN.
    JointDistribution condition(const std::vector<std::pair<std::string, int>>& evidence) const;

    // Condition 3 of conditional independence: P(X,Y|Z) = P(X|Z) P(Y|Z) for
    // every assignment of Z with P(Z) > 0. Exact equality in rational mode,
    // within the tolerance in floating mode.
    bool ci_holds(const CIStatement& s) const;

    // Every CI statement that holds, as a canonical set. singleton_pairs
    // scans all (x, y, Z) with singleton x and y; full_sets scans all
    // disjoint set triples and refuses more than 6 variables.
    CISet all_ci(CiScope scope) const;

    std::string to_string() const;

    bool operator==(const JointDistribution& other) const;

  private:
    JointDistribution() = default;

    std::vector<Variable> vars_;
    std::variant<std::vector<Rational>, std::vector<double>> probs_;
    double tol_ = 1e-9;
};

}  // namespace causalkit

#endif  // CAUSALKIT_DISTRIBUTION_HPP
