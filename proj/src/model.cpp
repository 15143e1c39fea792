#include "causalkit/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "causalkit/rng.hpp"

namespace causalkit {

Cpt::Cpt(int child, std::vector<int> parents, int child_card, std::vector<int> parent_cards,
         ExactRows rows)
    : child_(child),
      parents_(std::move(parents)),
      child_card_(child_card),
      parent_cards_(std::move(parent_cards)),
      rows_(std::move(rows)) {
    validate();
}

Cpt::Cpt(int child, std::vector<int> parents, int child_card, std::vector<int> parent_cards,
         FloatRows rows)
    : child_(child),
      parents_(std::move(parents)),
      child_card_(child_card),
      parent_cards_(std::move(parent_cards)),
      rows_(std::move(rows)) {
    validate();
}

std::size_t Cpt::row_count() const {
    std::size_t rows = 1;
    for (int card : parent_cards_) rows *= static_cast<std::size_t>(card);
    return rows;
}

std::size_t Cpt::row_index(const std::vector<int>& parent_values) const {
    if (parent_values.size() != parents_.size()) {
        throw std::invalid_argument("parent assignment size mismatch");
    }
    std::size_t idx = 0;
    for (std::size_t i = 0; i < parents_.size(); ++i) {
        const int v = parent_values[i];
        if (v < 0 || v >= parent_cards_[i]) throw std::invalid_argument("parent value out of range");
        idx = idx * static_cast<std::size_t>(parent_cards_[i]) + static_cast<std::size_t>(v);
    }
    return idx;
}

const std::vector<Rational>& Cpt::exact_row(std::size_t row) const {
    return std::get<ExactRows>(rows_).at(row);
}

const std::vector<double>& Cpt::float_row(std::size_t row) const {
    return std::get<FloatRows>(rows_).at(row);
}

void Cpt::validate() const {
    if (child_card_ < 1) throw std::invalid_argument("child cardinality must be positive");
    if (parents_.size() != parent_cards_.size()) {
        throw std::invalid_argument("parent list and cardinality list differ in length");
    }
    if (!std::is_sorted(parents_.begin(), parents_.end()) ||
        std::adjacent_find(parents_.begin(), parents_.end()) != parents_.end()) {
        throw std::invalid_argument("CPT parents must be strictly ascending");
    }
    const std::size_t rows = row_count();
    if (const auto* exact = std::get_if<ExactRows>(&rows_)) {
        if (exact->size() != rows) throw std::invalid_argument("CPT row count mismatch");
        for (const auto& row : *exact) {
            if (row.size() != static_cast<std::size_t>(child_card_)) {
                throw std::invalid_argument("CPT row length mismatch");
            }
            Rational sum = 0;
            for (const auto& p : row) {
                if (p < 0) throw std::invalid_argument("negative CPT entry");
                sum += p;
            }
            if (sum != 1) throw std::invalid_argument("CPT row does not sum to 1");
        }
    } else {
        const auto& rows_f = std::get<FloatRows>(rows_);
        if (rows_f.size() != rows) throw std::invalid_argument("CPT row count mismatch");
        for (const auto& row : rows_f) {
            if (row.size() != static_cast<std::size_t>(child_card_)) {
                throw std::invalid_argument("CPT row length mismatch");
            }
            double sum = 0.0;
            for (double p : row) {
                if (p < -1e-12) throw std::invalid_argument("negative CPT entry");
                sum += p;
            }
            if (std::abs(sum - 1.0) > 1e-12) {
                throw std::invalid_argument("CPT row does not sum to 1 within 1e-12");
            }
        }
    }
}

CausalModel::CausalModel(Dag dag, std::vector<int> cardinalities, std::vector<Cpt> cpts)
    : dag_(std::move(dag)), cards_(std::move(cardinalities)), cpts_(std::move(cpts)) {
    const int n = dag_.vertex_count();
    if (static_cast<int>(cards_.size()) != n || static_cast<int>(cpts_.size()) != n) {
        throw std::invalid_argument("model needs one cardinality and one CPT per vertex");
    }
    // CPTs are stored in vertex order.
    std::sort(cpts_.begin(), cpts_.end(),
              [](const Cpt& a, const Cpt& b) { return a.child() < b.child(); });
    for (int v = 0; v < n; ++v) {
        const Cpt& c = cpts_[static_cast<std::size_t>(v)];
        if (c.child() != v) throw std::invalid_argument("missing CPT for " + dag_.name(v));
        if (c.child_cardinality() != cards_[static_cast<std::size_t>(v)]) {
            throw std::invalid_argument("CPT cardinality mismatch for " + dag_.name(v));
        }
        const auto parents = set_indices(dag_.parent_set(v));
        if (c.parents() != parents) {
            throw std::invalid_argument("CPT parent list of " + dag_.name(v) +
                                        " does not match DAG parents");
        }
        for (std::size_t i = 0; i < parents.size(); ++i) {
            if (c.parent_cardinalities()[i] != cards_[static_cast<std::size_t>(parents[i])]) {
                throw std::invalid_argument("CPT parent cardinality mismatch for " + dag_.name(v));
            }
        }
        if (v > 0 && c.mode() != cpts_.front().mode()) {
            throw std::invalid_argument("all CPTs must share one numeric mode");
        }
    }
}

std::vector<Variable> CausalModel::variables() const {
    std::vector<Variable> vars;
    vars.reserve(cards_.size());
    for (int v = 0; v < dag_.vertex_count(); ++v) {
        vars.push_back(Variable{dag_.name(v), cards_[static_cast<std::size_t>(v)]});
    }
    return vars;
}

JointDistribution joint_from_model(const CausalModel& m, double tolerance) {
    const int n = m.dag().vertex_count();
    std::size_t cells = 1;
    for (int v = 0; v < n; ++v) cells *= static_cast<std::size_t>(m.cardinality(v));

    std::vector<int> assignment(static_cast<std::size_t>(n), 0);
    auto advance = [&]() {
        for (int v = n - 1; v >= 0; --v) {
            if (++assignment[static_cast<std::size_t>(v)] < m.cardinality(v)) return true;
            assignment[static_cast<std::size_t>(v)] = 0;
        }
        return false;
    };
    auto parent_values = [&](int v) {
        std::vector<int> values;
        for (int p : set_indices(m.dag().parent_set(v))) {
            values.push_back(assignment[static_cast<std::size_t>(p)]);
        }
        return values;
    };

    if (m.mode() == NumericMode::exact) {
        std::vector<Rational> probs;
        probs.reserve(cells);
        do {
            Rational p = 1;
            for (int v = 0; v < n; ++v) {
                const Cpt& c = m.cpt(v);
                p *= c.exact_row(c.row_index(parent_values(v)))
                         [static_cast<std::size_t>(assignment[static_cast<std::size_t>(v)])];
                if (p == 0) break;
            }
            probs.push_back(p);
        } while (advance());
        return JointDistribution::exact(m.variables(), std::move(probs));
    }
    std::vector<double> probs;
    probs.reserve(cells);
    do {
        double p = 1.0;
        for (int v = 0; v < n; ++v) {
            const Cpt& c = m.cpt(v);
            p *= c.float_row(c.row_index(parent_values(v)))
                     [static_cast<std::size_t>(assignment[static_cast<std::size_t>(v)])];
        }
        probs.push_back(p);
    } while (advance());
    return JointDistribution::floating(m.variables(), std::move(probs), tolerance);
}

CausalModel deterministic_extension(const CausalModel& m) {
    if (m.mode() != NumericMode::exact) {
        throw std::invalid_argument("deterministic extension requires rational mode");
    }
    const Dag& dag = m.dag();
    const int n = dag.vertex_count();

    std::vector<std::string> names = dag.names();
    std::vector<int> cards = m.cardinalities();
    std::vector<std::pair<int, int>> edges = dag.edges();
    std::vector<int> endogenous;
    for (int v = 0; v < n; ++v) {
        if (dag.parent_set(v) != 0) endogenous.push_back(v);
    }

    // One response-function parent per endogenous variable: its values are
    // tuples assigning a child value to every CPT row (row 0 most
    // significant), distributed as the product of the row distributions.
    std::vector<int> response_var(static_cast<std::size_t>(n), -1);
    for (int v : endogenous) {
        const Cpt& c = m.cpt(v);
        const std::size_t rows = c.row_count();
        double log_card = static_cast<double>(rows) * std::log2(static_cast<double>(m.cardinality(v)));
        if (log_card > 16.0) {
            throw std::invalid_argument("deterministic extension would need a parent with more than 2^16 values");
        }
        int card = 1;
        for (std::size_t r = 0; r < rows; ++r) card *= m.cardinality(v);
        const int u = static_cast<int>(names.size());
        response_var[static_cast<std::size_t>(v)] = u;
        names.push_back("U_" + dag.name(v));
        cards.push_back(card);
        edges.emplace_back(u, v);
    }

    Dag extended(names, edges);
    std::vector<Cpt> cpts;

    // Priors of the original exogenous variables carry over unchanged.
    for (int v = 0; v < n; ++v) {
        if (dag.parent_set(v) != 0) continue;
        cpts.emplace_back(v, std::vector<int>{}, m.cardinality(v), std::vector<int>{},
                          Cpt::ExactRows{m.cpt(v).exact_row(0)});
    }

    for (int v : endogenous) {
        const Cpt& c = m.cpt(v);
        const std::size_t rows = c.row_count();
        const int child_card = m.cardinality(v);
        const int u = response_var[static_cast<std::size_t>(v)];
        const int u_card = cards[static_cast<std::size_t>(u)];

        // Prior of the response variable: product over rows.
        std::vector<Rational> prior(static_cast<std::size_t>(u_card));
        for (int value = 0; value < u_card; ++value) {
            Rational p = 1;
            int rest = value;
            for (std::size_t r = rows; r-- > 0;) {
                const int digit = rest % child_card;
                rest /= child_card;
                p *= c.exact_row(r)[static_cast<std::size_t>(digit)];
            }
            prior[static_cast<std::size_t>(value)] = p;
        }
        cpts.emplace_back(u, std::vector<int>{}, u_card, std::vector<int>{},
                          Cpt::ExactRows{std::move(prior)});

        // Deterministic CPT: the child copies the response digit selected by
        // its original parents' row.
        std::vector<int> parents = c.parents();
        parents.push_back(u);  // u's index exceeds every original index
        std::vector<int> parent_cards = c.parent_cardinalities();
        parent_cards.push_back(u_card);

        Cpt::ExactRows det_rows;
        det_rows.reserve(rows * static_cast<std::size_t>(u_card));
        for (std::size_t r = 0; r < rows; ++r) {
            for (int value = 0; value < u_card; ++value) {
                // Digit of `value` at row r (row 0 most significant).
                int digit = value;
                for (std::size_t skip = rows - 1 - r; skip > 0; --skip) digit /= child_card;
                digit %= child_card;
                std::vector<Rational> row(static_cast<std::size_t>(child_card), Rational(0));
                row[static_cast<std::size_t>(digit)] = 1;
                det_rows.push_back(std::move(row));
            }
        }
        cpts.emplace_back(v, std::move(parents), child_card, std::move(parent_cards),
                          std::move(det_rows));
    }

    return CausalModel(std::move(extended), std::move(cards), std::move(cpts));
}

CausalModel fit_model(const Dag& dag, const JointDistribution& joint) {
    const int n = dag.vertex_count();
    if (joint.variable_count() != n) throw std::invalid_argument("variable count mismatch");
    for (int v = 0; v < n; ++v) {
        if (joint.variables()[static_cast<std::size_t>(v)].name != dag.name(v)) {
            throw std::invalid_argument("fit_model requires matching variable order");
        }
    }
    std::vector<int> cards;
    for (const auto& v : joint.variables()) cards.push_back(v.cardinality);

    std::vector<Cpt> cpts;
    for (int v = 0; v < n; ++v) {
        const auto parents = set_indices(dag.parent_set(v));
        std::vector<int> parent_cards;
        for (int p : parents) parent_cards.push_back(cards[static_cast<std::size_t>(p)]);
        const int child_card = cards[static_cast<std::size_t>(v)];

        const JointDistribution family = joint.marginalize(dag.parent_set(v) | single(v));

        std::size_t rows = 1;
        for (int card : parent_cards) rows *= static_cast<std::size_t>(card);

        auto family_index = [&](const std::vector<int>& parent_values, int child_value) {
            // The family marginal keeps the original variable order.
            std::vector<int> assignment;
            std::size_t pi = 0;
            for (int i = 0; i < n; ++i) {
                if (i == v) {
                    assignment.push_back(child_value);
                } else if (contains(dag.parent_set(v), i)) {
                    assignment.push_back(parent_values[pi++]);
                }
            }
            return family.cell_index(assignment);
        };

        if (joint.mode() == NumericMode::exact) {
            Cpt::ExactRows out_rows;
            for (std::size_t r = 0; r < rows; ++r) {
                std::vector<int> parent_values(parents.size());
                std::size_t rest = r;
                for (std::size_t i = parents.size(); i-- > 0;) {
                    parent_values[i] = static_cast<int>(rest % static_cast<std::size_t>(parent_cards[i]));
                    rest /= static_cast<std::size_t>(parent_cards[i]);
                }
                std::vector<Rational> row(static_cast<std::size_t>(child_card));
                Rational total = 0;
                for (int value = 0; value < child_card; ++value) {
                    row[static_cast<std::size_t>(value)] =
                        family.exact_prob(family_index(parent_values, value));
                    total += row[static_cast<std::size_t>(value)];
                }
                if (total == 0) {
                    for (auto& p : row) p = Rational(1, child_card);
                } else {
                    for (auto& p : row) p /= total;
                }
                out_rows.push_back(std::move(row));
            }
            cpts.emplace_back(v, parents, child_card, parent_cards, std::move(out_rows));
        } else {
            Cpt::FloatRows out_rows;
            for (std::size_t r = 0; r < rows; ++r) {
                std::vector<int> parent_values(parents.size());
                std::size_t rest = r;
                for (std::size_t i = parents.size(); i-- > 0;) {
                    parent_values[i] = static_cast<int>(rest % static_cast<std::size_t>(parent_cards[i]));
                    rest /= static_cast<std::size_t>(parent_cards[i]);
                }
                std::vector<double> row(static_cast<std::size_t>(child_card));
                double total = 0.0;
                for (int value = 0; value < child_card; ++value) {
                    row[static_cast<std::size_t>(value)] =
                        family.prob(family_index(parent_values, value));
                    total += row[static_cast<std::size_t>(value)];
                }
                if (total <= 0.0) {
                    for (auto& p : row) p = 1.0 / child_card;
                } else {
                    for (auto& p : row) p /= total;
                }
                out_rows.push_back(std::move(row));
            }
            cpts.emplace_back(v, parents, child_card, parent_cards, std::move(out_rows));
        }
    }
    return CausalModel(dag, cards, std::move(cpts));
}

CausalModel perturb_model(const CausalModel& m, const Rational& magnitude, std::uint64_t seed) {
    if (magnitude <= 0 || magnitude > 1) {
        throw std::invalid_argument("perturbation magnitude must be in (0, 1]");
    }
    const int n = m.dag().vertex_count();
    std::vector<Cpt> cpts;
    for (int v = 0; v < n; ++v) {
        const Cpt& c = m.cpt(v);
        const std::size_t rows = c.row_count();
        if (m.mode() == NumericMode::exact) {
            Cpt::ExactRows out_rows;
            for (std::size_t r = 0; r < rows; ++r) {
                Rng rng(mix_seed(seed, static_cast<std::uint64_t>(v), r));
                const auto noise = rng.rational_distribution(c.child_cardinality());
                const auto& row = c.exact_row(r);
                std::vector<Rational> mixed(row.size());
                for (std::size_t i = 0; i < row.size(); ++i) {
                    mixed[i] = (1 - magnitude) * row[i] + magnitude * noise[i];
                }
                out_rows.push_back(std::move(mixed));
            }
            cpts.emplace_back(v, c.parents(), c.child_cardinality(), c.parent_cardinalities(),
                              std::move(out_rows));
        } else {
            const double mag = to_double(magnitude);
            Cpt::FloatRows out_rows;
            for (std::size_t r = 0; r < rows; ++r) {
                Rng rng(mix_seed(seed, static_cast<std::uint64_t>(v), r));
                const auto noise = rng.double_distribution(c.child_cardinality());
                const auto& row = c.float_row(r);
                std::vector<double> mixed(row.size());
                for (std::size_t i = 0; i < row.size(); ++i) {
                    mixed[i] = (1.0 - mag) * row[i] + mag * noise[i];
                }
                out_rows.push_back(std::move(mixed));
            }
            cpts.emplace_back(v, c.parents(), c.child_cardinality(), c.parent_cardinalities(),
                              std::move(out_rows));
        }
    }
    return CausalModel(m.dag(), m.cardinalities(), std::move(cpts));
}

CausalModel random_model(const Dag& dag, const std::vector<int>& cardinalities,
                         std::uint64_t seed) {
    const int n = dag.vertex_count();
    if (static_cast<int>(cardinalities.size()) != n) {
        throw std::invalid_argument("cardinality list size mismatch");
    }
    std::vector<Cpt> cpts;
    for (int v = 0; v < n; ++v) {
        const auto parents = set_indices(dag.parent_set(v));
        std::vector<int> parent_cards;
        std::size_t rows = 1;
        for (int p : parents) {
            parent_cards.push_back(cardinalities[static_cast<std::size_t>(p)]);
            rows *= static_cast<std::size_t>(parent_cards.back());
        }
        Cpt::ExactRows out_rows;
        for (std::size_t r = 0; r < rows; ++r) {
            Rng rng(mix_seed(seed, static_cast<std::uint64_t>(v), r, 0xa11));
            out_rows.push_back(rng.rational_distribution(cardinalities[static_cast<std::size_t>(v)]));
        }
        cpts.emplace_back(v, parents, cardinalities[static_cast<std::size_t>(v)], parent_cards,
                          std::move(out_rows));
    }
    return CausalModel(dag, cardinalities, std::move(cpts));
}

Dag random_dag(const std::vector<std::string>& names, std::uint64_t seed) {
    Rng rng(mix_seed(seed, 0xda6, names.size()));
    std::vector<std::pair<int, int>> edges;
    const int n = static_cast<int>(names.size());
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (rng.below(2) == 1) edges.emplace_back(i, j);
        }
    }
    return Dag(names, edges);
}

}  // namespace causalkit
