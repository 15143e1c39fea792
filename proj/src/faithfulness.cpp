#include "causalkit/faithfulness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "causalkit/rng.hpp"

namespace causalkit {

namespace {

std::string format_survival(double survival) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.4f", survival);
    return buffer;
}

}  // namespace

std::string FaithfulnessReport::to_text() const {
    std::ostringstream os;
    os << "statement | verdict | survival\n";
    for (const auto& c : statements) {
        os << c.statement.to_string(observed) << " | "
           << (c.origin == CiOrigin::structural ? "structural" : "fine_tuned") << " | "
           << format_survival(c.survival) << "\n";
    }
    if (statements.empty()) os << "(no independences)\n";
    os << "overall: " << (faithful ? "faithful" : "unfaithful") << "\n";
    return os.str();
}

std::string FaithfulnessReport::to_json() const {
    std::ostringstream os;
    os << "{\n  \"statements\": [";
    bool first = true;
    for (const auto& c : statements) {
        if (!first) os << ",";
        first = false;
        os << "\n    {\"statement\": \"" << c.statement.to_string(observed) << "\", \"verdict\": \""
           << (c.origin == CiOrigin::structural ? "structural" : "fine_tuned")
           << "\", \"survival\": " << format_survival(c.survival) << "}";
    }
    if (!statements.empty()) os << "\n  ";
    os << "],\n  \"faithful\": " << (faithful ? "true" : "false") << "\n}\n";
    return os.str();
}

double perturbation_stability(const CausalModel& m, const CIStatement& s, int trials,
                              const Rational& magnitude, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("perturbation needs at least one trial");
    if (magnitude < 0 || magnitude > 1) {
        throw std::invalid_argument("perturbation magnitude must be in [0, 1]");
    }
    if (magnitude == 0) {
        // No perturbation: the statement either holds or it does not.
        return joint_from_model(m).ci_holds(s) ? 1.0 : 0.0;
    }
    int survived = 0;
    for (int trial = 0; trial < trials; ++trial) {
        const auto perturbed =
            perturb_model(m, magnitude, mix_seed(seed, static_cast<std::uint64_t>(trial), 0xf1ed));
        if (joint_from_model(perturbed).ci_holds(s)) ++survived;
    }
    return static_cast<double>(survived) / static_cast<double>(trials);
}

FaithfulnessReport classify_independences(const CausalModel& m, VarSet observed,
                                          const PerturbOptions& opts) {
    const Dag& dag = m.dag();
    if (!is_subset(observed, dag.all_vertices()) || observed == 0) {
        throw std::invalid_argument("observed set must be a nonempty subset of the model variables");
    }
    const auto obs = set_indices(observed);

    const JointDistribution joint = joint_from_model(m);
    const JointDistribution marginal = joint.marginalize(observed);
    const CiScope scope =
        static_cast<int>(obs.size()) <= 6 ? CiScope::full_sets : CiScope::singleton_pairs;
    const CISet found = marginal.all_ci(scope);

    FaithfulnessReport report;
    report.observed = marginal.variable_names();
    for (const auto& s : found) {
        // Map observed-relative indices back to model vertices.
        auto lift = [&](VarSet set) {
            VarSet out = 0;
            for (int i : set_indices(set)) out |= single(obs[static_cast<std::size_t>(i)]);
            return out;
        };
        const CIStatement lifted = CIStatement::make(lift(s.x), lift(s.y), lift(s.z));
        ClassifiedCi entry;
        entry.statement = s;
        entry.origin = dag.d_separated(lifted.x, lifted.y, lifted.z) ? CiOrigin::structural
                                                                     : CiOrigin::fine_tuned;
        entry.survival =
            perturbation_stability(m, lifted, opts.trials, opts.magnitude, opts.seed);
        report.statements.push_back(entry);
        if (entry.origin == CiOrigin::fine_tuned) report.faithful = false;
    }
    return report;
}

WingRoles resolve_roles(const CausalModel& m) {
    WingRoles roles;
    const Dag& dag = m.dag();
    for (int v = 0; v < dag.vertex_count(); ++v) {
        if (dag.name(v) == "S") roles.s = v;
        if (dag.name(v) == "T") roles.t = v;
        if (dag.name(v) == "A") roles.a = v;
        if (dag.name(v) == "B") roles.b = v;
    }
    if (roles.s < 0 || roles.t < 0 || roles.a < 0 || roles.b < 0) {
        throw std::invalid_argument("model does not declare the roles S, T, A, B");
    }
    return roles;
}

std::map<std::string, bool> signalling_check(const JointDistribution& joint,
                                             const WingRoles& roles) {
    std::map<std::string, bool> out;
    out["left"] = joint.ci_holds(CIStatement::make(single(roles.a), single(roles.t), single(roles.s)));
    out["right"] = joint.ci_holds(CIStatement::make(single(roles.b), single(roles.s), single(roles.t)));
    return out;
}

std::map<std::string, bool> signalling_check(const CausalModel& m, const WingRoles& roles) {
    return signalling_check(joint_from_model(m), roles);
}

std::map<std::string, bool> signalling_check(const CausalModel& m) {
    return signalling_check(m, resolve_roles(m));
}

LatentStructure triple_cause_structure() {
    Dag dag({"X", "Y", "Z", "L1"}, {{3, 0}, {3, 1}, {3, 2}});
    return LatentStructure(std::move(dag), 3);
}

LatentStructure pairwise_cause_structure() {
    // L1 confounds (X, Y), L2 confounds (Y, Z), L3 confounds (X, Z).
    Dag dag({"X", "Y", "Z", "L1", "L2", "L3"},
            {{3, 0}, {3, 1}, {4, 1}, {4, 2}, {5, 0}, {5, 2}});
    return LatentStructure(std::move(dag), 3);
}

double balanced_agreement(const JointDistribution& joint) {
    if (joint.variable_count() != 3) {
        throw std::invalid_argument("balanced agreement expects exactly three variables");
    }
    for (const auto& v : joint.variables()) {
        if (v.cardinality != 2) throw std::invalid_argument("variables must be binary");
    }
    const double p000 = joint.prob(0);
    const double p111 = joint.prob(7);
    return 2.0 * std::min(p000, p111);
}

namespace {

// Flat parameter vector for one structure: latent priors then observed CPT
// rows, each block a distribution.
struct GapParameters {
    std::vector<std::vector<double>> blocks;
};

CausalModel build_gap_model(const LatentStructure& structure, int latent_card,
                            const GapParameters& params) {
    const Dag& dag = structure.dag();
    const int n = dag.vertex_count();
    std::vector<int> cards(static_cast<std::size_t>(n), 2);
    for (int v = structure.observed_count(); v < n; ++v) {
        cards[static_cast<std::size_t>(v)] = latent_card;
    }
    std::vector<Cpt> cpts;
    std::size_t block = 0;
    for (int v = 0; v < n; ++v) {
        const auto parents = set_indices(dag.parent_set(v));
        std::vector<int> parent_cards;
        std::size_t rows = 1;
        for (int p : parents) {
            parent_cards.push_back(cards[static_cast<std::size_t>(p)]);
            rows *= static_cast<std::size_t>(parent_cards.back());
        }
        Cpt::FloatRows cpt_rows;
        for (std::size_t r = 0; r < rows; ++r) cpt_rows.push_back(params.blocks.at(block++));
        cpts.emplace_back(v, parents, cards[static_cast<std::size_t>(v)], parent_cards,
                          std::move(cpt_rows));
    }
    return CausalModel(dag, cards, std::move(cpts));
}

std::vector<std::size_t> block_sizes(const LatentStructure& structure, int latent_card) {
    const Dag& dag = structure.dag();
    std::vector<std::size_t> sizes;
    for (int v = 0; v < dag.vertex_count(); ++v) {
        const auto parents = set_indices(dag.parent_set(v));
        std::size_t rows = 1;
        for (int p : parents) {
            rows *= static_cast<std::size_t>(
                v >= structure.observed_count() || p >= structure.observed_count() ? latent_card : 2);
        }
        const int card = v >= structure.observed_count() ? latent_card : 2;
        for (std::size_t r = 0; r < rows; ++r) sizes.push_back(static_cast<std::size_t>(card));
    }
    return sizes;
}

double evaluate_gap(const LatentStructure& structure, int latent_card,
                    const GapParameters& params) {
    const CausalModel model = build_gap_model(structure, latent_card, params);
    const JointDistribution joint = joint_from_model(model);
    return balanced_agreement(joint.marginalize(structure.observed_set()));
}

void renormalize(std::vector<double>& block) {
    double total = 0.0;
    for (double& p : block) {
        if (p < 0.0) p = 0.0;
        total += p;
    }
    if (total <= 0.0) {
        for (double& p : block) p = 1.0 / static_cast<double>(block.size());
    } else {
        for (double& p : block) p /= total;
    }
}

GapParameters copy_candidate(const LatentStructure& structure, int latent_card) {
    // Latents uniform over their first two values; each observed variable
    // copies (the parity of) its first parent.
    const Dag& dag = structure.dag();
    GapParameters params;
    for (int v = 0; v < dag.vertex_count(); ++v) {
        const auto parents = set_indices(dag.parent_set(v));
        if (parents.empty()) {
            std::vector<double> prior(static_cast<std::size_t>(latent_card), 0.0);
            prior[0] = 0.5;
            prior[1 % latent_card] = prior[1 % latent_card] + 0.5;
            params.blocks.push_back(prior);
            continue;
        }
        std::vector<std::size_t> parent_cards;
        std::size_t rows = 1;
        for (std::size_t i = 0; i < parents.size(); ++i) {
            parent_cards.push_back(static_cast<std::size_t>(latent_card));
            rows *= static_cast<std::size_t>(latent_card);
        }
        for (std::size_t r = 0; r < rows; ++r) {
            // Value of the first parent in row r.
            std::size_t first = r;
            for (std::size_t i = parents.size(); i-- > 1;) first /= parent_cards[i];
            const int bit = static_cast<int>(first % 2);
            std::vector<double> row(2, 0.0);
            row[static_cast<std::size_t>(bit)] = 1.0;
            params.blocks.push_back(row);
        }
    }
    return params;
}

double search_structure(const LatentStructure& structure, int latent_card, int grid,
                        std::uint64_t seed, int samples, GapParameters& best_params) {
    const auto sizes = block_sizes(structure, latent_card);

    double best = -1.0;
    auto consider = [&](const GapParameters& params) {
        const double value = evaluate_gap(structure, latent_card, params);
        if (value > best) {
            best = value;
            best_params = params;
        }
    };

    consider(copy_candidate(structure, latent_card));

    for (int sample = 0; sample < samples; ++sample) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(sample), 0x6a9));
        GapParameters params;
        for (std::size_t size : sizes) {
            params.blocks.push_back(rng.double_distribution(static_cast<int>(size)));
        }
        consider(params);
    }

    // Hill-climb the incumbent on a 1/grid step size until no step helps.
    const double step = 1.0 / static_cast<double>(grid);
    bool improved = true;
    int rounds = 0;
    while (improved && rounds < 200) {
        improved = false;
        ++rounds;
        for (std::size_t b = 0; b < best_params.blocks.size(); ++b) {
            for (std::size_t i = 0; i < best_params.blocks[b].size(); ++i) {
                for (double direction : {step, -step}) {
                    GapParameters trial = best_params;
                    trial.blocks[b][i] += direction;
                    renormalize(trial.blocks[b]);
                    const double value = evaluate_gap(structure, latent_card, trial);
                    if (value > best + 1e-12) {
                        best = value;
                        best_params = trial;
                        improved = true;
                    }
                }
            }
        }
    }
    return best;
}

}  // namespace

GapSearchResult expressive_gap_demo(const LatentStructure& pairwise, const LatentStructure& triple,
                                    int latent_card, int grid, std::uint64_t seed, int samples) {
    if (latent_card < 2) throw std::invalid_argument("latent cardinality must be at least 2");
    if (grid < 2) throw std::invalid_argument("grid must be at least 2");
    if (triple.latent_count() != 1 || triple.observed_count() != 3) {
        throw std::invalid_argument("triple structure must have one latent over three observed");
    }
    if (pairwise.latent_count() != 3 || pairwise.observed_count() != 3 || !pairwise.is_pairwise()) {
        throw std::invalid_argument("pairwise structure must have three pairwise confounders");
    }

    GapSearchResult result;
    result.latent_cardinality = latent_card;
    result.grid = grid;
    result.seed = seed;
    result.samples = samples;

    GapParameters params;
    result.triple_max = search_structure(triple, latent_card, grid, mix_seed(seed, 3), samples, params);
    result.pairwise_max =
        search_structure(pairwise, latent_card, grid, mix_seed(seed, 2), samples, params);
    return result;
}

Rational pairwise_deterministic_max() {
    // X = f(l, n), Y = g(l, m), Z = h(m, n) with uniform binary latents;
    // exhaustive over the 16^3 deterministic function triples.
    Rational best = 0;
    for (int f = 0; f < 16; ++f) {
        for (int g = 0; g < 16; ++g) {
            for (int h = 0; h < 16; ++h) {
                int count000 = 0, count111 = 0;
                for (int l = 0; l < 2; ++l) {
                    for (int m = 0; m < 2; ++m) {
                        for (int n = 0; n < 2; ++n) {
                            const int x = (f >> (2 * l + n)) & 1;
                            const int y = (g >> (2 * l + m)) & 1;
                            const int z = (h >> (2 * m + n)) & 1;
                            if (x == 0 && y == 0 && z == 0) ++count000;
                            if (x == 1 && y == 1 && z == 1) ++count111;
                        }
                    }
                }
                const Rational balanced = Rational(2 * std::min(count000, count111), 8);
                if (balanced > best) best = balanced;
            }
        }
    }
    return best;
}

}  // namespace causalkit
