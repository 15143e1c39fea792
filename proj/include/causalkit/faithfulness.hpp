#ifndef CAUSALKIT_FAITHFULNESS_HPP
#define CAUSALKIT_FAITHFULNESS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "causalkit/model.hpp"
#include "causalkit/pattern.hpp"

namespace causalkit {

enum class CiOrigin { structural, fine_tuned };

struct ClassifiedCi {
    CIStatement statement;  // over the observed variables
    CiOrigin origin = CiOrigin::structural;
    double survival = 1.0;  // fraction of perturbed models still satisfying it
};

// Per-statement verdicts for every CI holding in the observed marginal.
// Faithful overall exactly when every observed CI is structural.
struct FaithfulnessReport {
    std::vector<std::string> observed;
    std::vector<ClassifiedCi> statements;
    bool faithful = true;

    std::string to_text() const;
    std::string to_json() const;
};

struct PerturbOptions {
    int trials = 200;
    Rational magnitude = Rational(1, 10);
    std::uint64_t seed = 1;
};

// Fraction of `trials` seeded row perturbations of the model under which the
// statement still holds in the (full) joint. Statement indices refer to the
// model's vertices. Deterministic given the seed.
double perturbation_stability(const CausalModel& m, const CIStatement& s, int trials,
                              const Rational& magnitude, std::uint64_t seed);

// Scans the observed marginal for conditional independences (full-set scope)
// and classifies each as structural (its variables are d-separated in the
// full DAG, latents included) or fine-tuned. Also attaches the perturbation
// survival rate of each statement.
FaithfulnessReport classify_independences(const CausalModel& m, VarSet observed,
                                          const PerturbOptions& opts = {});

// Setting/outcome roles per wing, as model vertex indices.
struct WingRoles {
    int s = -1;
    int t = -1;
    int a = -1;
    int b = -1;
};

// Resolves roles by the conventional names S, T, A, B; throws if any is
// missing.
WingRoles resolve_roles(const CausalModel& m);

// No-signalling checks on the model's joint: "left" is (A indep T | S),
// "right" is (B indep S | T); true means no signalling into that wing.
std::map<std::string, bool> signalling_check(const CausalModel& m);
std::map<std::string, bool> signalling_check(const CausalModel& m, const WingRoles& roles);
std::map<std::string, bool> signalling_check(const JointDistribution& joint,
                                             const WingRoles& roles);

// The two three-variable confounding structures compared by the
// expressiveness-gap demonstration: one latent influencing all of X, Y, Z
// versus three pairwise confounders.
LatentStructure triple_cause_structure();
LatentStructure pairwise_cause_structure();

// Probability mass on the two all-equal outcomes, penalized for imbalance:
// 2 * min(P(X=Y=Z=0), P(X=Y=Z=1)). Equals 1 exactly for the half-half
// perfect-correlation distribution and 0 for any point mass.
double balanced_agreement(const JointDistribution& joint);

struct GapSearchResult {
    double triple_max = 0.0;
    double pairwise_max = 0.0;
    int latent_cardinality = 0;
    int samples = 0;
    int grid = 0;
    std::uint64_t seed = 0;
};

// Seeded random search plus hill-climbing refinement over the CPTs of both
// structures, maximizing balanced agreement. The triple structure contains
// an exact copy mechanism and reaches 1; the pairwise structure stays
// strictly below 1.
GapSearchResult expressive_gap_demo(const LatentStructure& pairwise,
                                    const LatentStructure& triple, int latent_card, int grid,
                                    std::uint64_t seed, int samples = 2000);

// Exact maximum of balanced agreement over deterministic observed CPTs with
// uniform binary latents in the pairwise structure, by exhaustive search.
Rational pairwise_deterministic_max();

}  // namespace causalkit

#endif  // CAUSALKIT_FAITHFULNESS_HPP
