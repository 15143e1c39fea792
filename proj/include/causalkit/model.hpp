#ifndef CAUSALKIT_MODEL_HPP
#define CAUSALKIT_MODEL_HPP

#include <cstdint>
#include <variant>
#include <vector>

#include "causalkit/distribution.hpp"
#include "causalkit/graph.hpp"
#include "causalkit/rational.hpp"

namespace causalkit {

// Conditional probability table for one variable given its parents. Rows are
// indexed by the parent assignment (row-major, first parent most
// significant); each row is a distribution over the child's values.
class Cpt {
  public:
    using ExactRows = std::vector<std::vector<Rational>>;
    using FloatRows = std::vector<std::vector<double>>;

    Cpt(int child, std::vector<int> parents, int child_card, std::vector<int> parent_cards,
        ExactRows rows);
    Cpt(int child, std::vector<int> parents, int child_card, std::vector<int> parent_cards,
        FloatRows rows);

    int child() const { return child_; }
    const std::vector<int>& parents() const { return parents_; }
    int child_cardinality() const { return child_card_; }
    const std::vector<int>& parent_cardinalities() const { return parent_cards_; }
    NumericMode mode() const {
        return std::holds_alternative<ExactRows>(rows_) ? NumericMode::exact
                                                        : NumericMode::floating;
    }

    std::size_t row_count() const;
    std::size_t row_index(const std::vector<int>& parent_values) const;

    const std::vector<Rational>& exact_row(std::size_t row) const;
    const std::vector<double>& float_row(std::size_t row) const;

  private:
    void validate() const;

    int child_;
    std::vector<int> parents_;
    int child_card_;
    std::vector<int> parent_cards_;
    std::variant<ExactRows, FloatRows> rows_;
};

// A causal structure plus one CPT per variable; the CPT parent lists must
// match the DAG parents exactly (ascending index order), and all CPTs must
// share one numeric mode.
class CausalModel {
  public:
    CausalModel(Dag dag, std::vector<int> cardinalities, std::vector<Cpt> cpts);

    const Dag& dag() const { return dag_; }
    const std::vector<int>& cardinalities() const { return cards_; }
    int cardinality(int v) const { return cards_.at(static_cast<std::size_t>(v)); }
    const Cpt& cpt(int v) const { return cpts_.at(static_cast<std::size_t>(v)); }
    const std::vector<Cpt>& cpts() const { return cpts_; }
    NumericMode mode() const { return cpts_.front().mode(); }

    std::vector<Variable> variables() const;

  private:
    Dag dag_;
    std::vector<int> cards_;
    std::vector<Cpt> cpts_;
};

// The factorized joint P(v1..vn) = prod P(vi | Pa(vi)); exact in rational
// mode. `tolerance` only applies to floating mode.
JointDistribution joint_from_model(const CausalModel& m, double tolerance = 1e-9);

// Adds one fresh exogenous parent per endogenous variable whose values
// enumerate response functions (one child value per CPT row), making every
// endogenous CPT deterministic. Marginalizing the new parents out of the
// extension's joint reproduces the original joint exactly. Rational mode
// only.
CausalModel deterministic_extension(const CausalModel& m);

// Fits CPTs to `joint` along the structure of `dag` (conditional
// probabilities read off the distribution; rows with zero-probability parent
// contexts become uniform). The result reproduces `joint` exactly whenever
// the DAG's d-separation CI set holds in `joint`.
CausalModel fit_model(const Dag& dag, const JointDistribution& joint);

// Mixes every CPT row toward a fresh random distribution at weight
// `magnitude` (0 < magnitude <= 1). Row randomness is derived counter-mode
// from the seed, so the result is independent of evaluation order.
CausalModel perturb_model(const CausalModel& m, const Rational& magnitude, std::uint64_t seed);

// Random model with small random rational CPT entries; used by the
// randomized soundness sweeps and the CLI demos.
CausalModel random_model(const Dag& dag, const std::vector<int>& cardinalities,
                         std::uint64_t seed);

// Random DAG over the given names: each forward pair (i, j) gets an edge
// with probability ~1/2 under the seeded generator.
Dag random_dag(const std::vector<std::string>& names, std::uint64_t seed);

}  // namespace causalkit

#endif  // CAUSALKIT_MODEL_HPP
