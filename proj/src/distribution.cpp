#include "causalkit/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace causalkit {

namespace {

std::size_t checked_cell_count(const std::vector<Variable>& vars) {
    if (vars.empty()) throw std::invalid_argument("distribution needs at least one variable");
    if (static_cast<int>(vars.size()) > kMaxVars) {
        throw std::invalid_argument("too many variables");
    }
    std::size_t cells = 1;
    for (const auto& v : vars) {
        if (v.cardinality < 1) throw std::invalid_argument("cardinality must be positive");
        cells *= static_cast<std::size_t>(v.cardinality);
        if (cells > (std::size_t{1} << 26)) throw std::invalid_argument("table too large");
    }
    return cells;
}

void check_unique_names(const std::vector<Variable>& vars) {
    for (std::size_t i = 0; i < vars.size(); ++i) {
        for (std::size_t j = i + 1; j < vars.size(); ++j) {
            if (vars[i].name == vars[j].name) {
                throw std::invalid_argument("duplicate variable name '" + vars[i].name + "'");
            }
        }
    }
}

}  // namespace

JointDistribution JointDistribution::exact(std::vector<Variable> vars,
                                           std::vector<Rational> probs) {
    const std::size_t cells = checked_cell_count(vars);
    check_unique_names(vars);
    if (probs.size() != cells) throw std::invalid_argument("probability table size mismatch");
    Rational total = 0;
    for (const auto& p : probs) {
        if (p < 0) throw std::invalid_argument("negative probability");
        total += p;
    }
    if (total != 1) throw std::invalid_argument("probabilities must sum to exactly 1");
    JointDistribution d;
    d.vars_ = std::move(vars);
    d.probs_ = std::move(probs);
    return d;
}

JointDistribution JointDistribution::floating(std::vector<Variable> vars,
                                              std::vector<double> probs, double tolerance) {
    const std::size_t cells = checked_cell_count(vars);
    check_unique_names(vars);
    if (probs.size() != cells) throw std::invalid_argument("probability table size mismatch");
    double total = 0.0;
    for (double p : probs) {
        if (p < -1e-12) throw std::invalid_argument("negative probability");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("probabilities must sum to 1 within 1e-9");
    }
    JointDistribution d;
    d.vars_ = std::move(vars);
    d.probs_ = std::move(probs);
    d.tol_ = tolerance;
    return d;
}

int JointDistribution::index_of(const std::string& name) const {
    for (int i = 0; i < variable_count(); ++i) {
        if (vars_[static_cast<std::size_t>(i)].name == name) return i;
    }
    throw std::invalid_argument("unknown variable '" + name + "'");
}

std::vector<std::string> JointDistribution::variable_names() const {
    std::vector<std::string> names;
    names.reserve(vars_.size());
    for (const auto& v : vars_) names.push_back(v.name);
    return names;
}

std::size_t JointDistribution::cell_count() const {
    std::size_t cells = 1;
    for (const auto& v : vars_) cells *= static_cast<std::size_t>(v.cardinality);
    return cells;
}

std::size_t JointDistribution::cell_index(const std::vector<int>& assignment) const {
    if (assignment.size() != vars_.size()) throw std::invalid_argument("assignment size mismatch");
    std::size_t idx = 0;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        const int value = assignment[i];
        if (value < 0 || value >= vars_[i].cardinality) {
            throw std::invalid_argument("value out of range for " + vars_[i].name);
        }
        idx = idx * static_cast<std::size_t>(vars_[i].cardinality) + static_cast<std::size_t>(value);
    }
    return idx;
}

std::vector<int> JointDistribution::assignment_of(std::size_t cell) const {
    std::vector<int> assignment(vars_.size());
    for (std::size_t i = vars_.size(); i-- > 0;) {
        const auto card = static_cast<std::size_t>(vars_[i].cardinality);
        assignment[i] = static_cast<int>(cell % card);
        cell /= card;
    }
    return assignment;
}

const Rational& JointDistribution::exact_prob(std::size_t cell) const {
    const auto* table = std::get_if<std::vector<Rational>>(&probs_);
    if (table == nullptr) throw std::logic_error("exact_prob on a floating distribution");
    return table->at(cell);
}

double JointDistribution::prob(std::size_t cell) const {
    if (const auto* table = std::get_if<std::vector<double>>(&probs_)) return table->at(cell);
    return to_double(std::get<std::vector<Rational>>(probs_).at(cell));
}

namespace {

// Shared marginalization core: maps each source cell to a target cell.
template <typename Num>
std::vector<Num> sum_into(const std::vector<Num>& src,
                          const std::function<std::size_t(std::size_t)>& target_of,
                          std::size_t target_cells) {
    std::vector<Num> out(target_cells, Num(0));
    for (std::size_t cell = 0; cell < src.size(); ++cell) out[target_of(cell)] += src[cell];
    return out;
}

}  // namespace

JointDistribution JointDistribution::marginalize(VarSet keep) const {
    if (keep == 0) throw std::invalid_argument("marginalize requires a nonempty keep set");
    if (!is_subset(keep, (VarSet{1} << variable_count()) - 1)) {
        throw std::invalid_argument("keep set contains unknown variables");
    }
    std::vector<Variable> kept;
    std::vector<int> kept_idx;
    for (int i = 0; i < variable_count(); ++i) {
        if (contains(keep, i)) {
            kept.push_back(vars_[static_cast<std::size_t>(i)]);
            kept_idx.push_back(i);
        }
    }
    std::size_t target_cells = 1;
    for (const auto& v : kept) target_cells *= static_cast<std::size_t>(v.cardinality);

    auto target_of = [&](std::size_t cell) {
        const auto assignment = assignment_of(cell);
        std::size_t idx = 0;
        for (std::size_t k = 0; k < kept.size(); ++k) {
            idx = idx * static_cast<std::size_t>(kept[k].cardinality) +
                  static_cast<std::size_t>(assignment[static_cast<std::size_t>(kept_idx[k])]);
        }
        return idx;
    };

    JointDistribution d;
    d.tol_ = tol_;
    if (const auto* table = std::get_if<std::vector<Rational>>(&probs_)) {
        d.probs_ = sum_into<Rational>(*table, target_of, target_cells);
    } else {
        d.probs_ = sum_into<double>(std::get<std::vector<double>>(probs_), target_of, target_cells);
    }
    d.vars_ = std::move(kept);
    return d;
}

JointDistribution JointDistribution::marginalize(const std::vector<std::string>& keep) const {
    VarSet set = 0;
    for (const auto& name : keep) set |= single(index_of(name));
    return marginalize(set);
}

JointDistribution JointDistribution::condition(
    const std::vector<std::pair<std::string, int>>& evidence) const {
    if (evidence.empty()) return *this;
    std::vector<int> fixed(vars_.size(), -1);
    for (const auto& [name, value] : evidence) {
        const int i = index_of(name);
        if (value < 0 || value >= vars_[static_cast<std::size_t>(i)].cardinality) {
            throw std::invalid_argument("evidence value out of range for " + name);
        }
        fixed[static_cast<std::size_t>(i)] = value;
    }
    std::vector<Variable> kept;
    std::vector<int> kept_idx;
    for (int i = 0; i < variable_count(); ++i) {
        if (fixed[static_cast<std::size_t>(i)] < 0) {
            kept.push_back(vars_[static_cast<std::size_t>(i)]);
            kept_idx.push_back(i);
        }
    }
    if (kept.empty()) throw std::invalid_argument("conditioning on every variable");
    std::size_t target_cells = 1;
    for (const auto& v : kept) target_cells *= static_cast<std::size_t>(v.cardinality);

    auto match = [&](const std::vector<int>& assignment) {
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            if (fixed[i] >= 0 && assignment[i] != fixed[i]) return false;
        }
        return true;
    };
    auto target_of = [&](const std::vector<int>& assignment) {
        std::size_t idx = 0;
        for (std::size_t k = 0; k < kept.size(); ++k) {
            idx = idx * static_cast<std::size_t>(kept[k].cardinality) +
                  static_cast<std::size_t>(assignment[static_cast<std::size_t>(kept_idx[k])]);
        }
        return idx;
    };

    JointDistribution d;
    d.tol_ = tol_;
    if (const auto* table = std::get_if<std::vector<Rational>>(&probs_)) {
        std::vector<Rational> out(target_cells, Rational(0));
        Rational total = 0;
        for (std::size_t cell = 0; cell < table->size(); ++cell) {
            const auto assignment = assignment_of(cell);
            if (!match(assignment)) continue;
            out[target_of(assignment)] += (*table)[cell];
            total += (*table)[cell];
        }
        if (total == 0) throw std::domain_error("conditioning on zero-probability evidence");
        for (auto& p : out) p /= total;
        d.vars_ = std::move(kept);
        d.probs_ = std::move(out);
    } else {
        const auto& ftable = std::get<std::vector<double>>(probs_);
        std::vector<double> out(target_cells, 0.0);
        double total = 0.0;
        for (std::size_t cell = 0; cell < ftable.size(); ++cell) {
            const auto assignment = assignment_of(cell);
            if (!match(assignment)) continue;
            out[target_of(assignment)] += ftable[cell];
            total += ftable[cell];
        }
        if (total <= tol_) throw std::domain_error("conditioning on zero-probability evidence");
        for (auto& p : out) p /= total;
        d.vars_ = std::move(kept);
        d.probs_ = std::move(out);
    }
    return d;
}

bool JointDistribution::ci_holds(const CIStatement& s) const {
    const VarSet all = (VarSet{1} << variable_count()) - 1;
    if (!is_subset(s.x | s.y | s.z, all)) {
        throw std::invalid_argument("CI statement mentions unknown variables");
    }
    const JointDistribution sub = marginalize(s.x | s.y | s.z);

    // Positions of X, Y, Z variables inside the marginal.
    VarSet xm = 0, ym = 0, zm = 0;
    {
        int pos = 0;
        for (int i = 0; i < variable_count(); ++i) {
            if (!contains(s.x | s.y | s.z, i)) continue;
            if (contains(s.x, i)) xm |= single(pos);
            if (contains(s.y, i)) ym |= single(pos);
            if (contains(s.z, i)) zm |= single(pos);
            ++pos;
        }
    }

    const JointDistribution pxz = sub.marginalize(xm | zm);
    const JointDistribution pyz = sub.marginalize(ym | zm);
    const bool has_z = zm != 0;

    // Cross-multiplied form of condition 3, quantified over P(Z) > 0:
    //   P(x,y,z) * P(z) == P(x,z) * P(y,z).
    if (mode() == NumericMode::exact) {
        const JointDistribution pz_dist = has_z ? sub.marginalize(zm) : sub;
        for (std::size_t cell = 0; cell < sub.cell_count(); ++cell) {
            const auto assignment = sub.assignment_of(cell);
            Rational pz = 1;
            if (has_z) {
                std::vector<int> za;
                for (int i : set_indices(zm)) za.push_back(assignment[static_cast<std::size_t>(i)]);
                pz = pz_dist.exact_prob(pz_dist.cell_index(za));
                if (pz == 0) continue;
            }
            std::vector<int> xza, yza;
            for (int i : set_indices(xm | zm)) xza.push_back(assignment[static_cast<std::size_t>(i)]);
            for (int i : set_indices(ym | zm)) yza.push_back(assignment[static_cast<std::size_t>(i)]);
            const Rational lhs = sub.exact_prob(cell) * pz;
            const Rational rhs = pxz.exact_prob(pxz.cell_index(xza)) *
                                 pyz.exact_prob(pyz.cell_index(yza));
            if (lhs != rhs) return false;
        }
        return true;
    }

    // Floating mode compares the conditional form within the tolerance;
    // contexts with P(z) <= tol impose no constraint.
    const JointDistribution pz_dist = has_z ? sub.marginalize(zm) : sub;
    for (std::size_t cell = 0; cell < sub.cell_count(); ++cell) {
        const auto assignment = sub.assignment_of(cell);
        double pz = 1.0;
        if (has_z) {
            std::vector<int> za;
            for (int i : set_indices(zm)) za.push_back(assignment[static_cast<std::size_t>(i)]);
            pz = pz_dist.prob(pz_dist.cell_index(za));
            if (pz <= tol_) continue;
        }
        std::vector<int> xza, yza;
        for (int i : set_indices(xm | zm)) xza.push_back(assignment[static_cast<std::size_t>(i)]);
        for (int i : set_indices(ym | zm)) yza.push_back(assignment[static_cast<std::size_t>(i)]);
        const double pxyz = sub.prob(cell);
        const double pxzv = pxz.prob(pxz.cell_index(xza));
        const double pyzv = pyz.prob(pyz.cell_index(yza));
        if (std::abs(pxyz / pz - (pxzv / pz) * (pyzv / pz)) > tol_) return false;
    }
    return true;
}

CISet JointDistribution::all_ci(CiScope scope) const {
    const int n = variable_count();
    CISet out(variable_names());
    if (scope == CiScope::singleton_pairs) {
        for (int a = 0; a < n; ++a) {
            for (int b = a + 1; b < n; ++b) {
                const VarSet rest = out.universe() & ~single(a) & ~single(b);
                for (VarSet z = rest;; z = (z - 1) & rest) {
                    const auto s = CIStatement::make(single(a), single(b), z);
                    if (ci_holds(s)) out.insert(s);
                    if (z == 0) break;
                }
            }
        }
        return out;
    }
    if (n > 6) {
        throw std::invalid_argument(
            "full_sets CI scan is limited to 6 variables; use singleton_pairs");
    }
    std::vector<int> role(static_cast<std::size_t>(n), 0);
    std::function<void(int, VarSet, VarSet, VarSet)> assign = [&](int pos, VarSet x, VarSet y,
                                                                  VarSet z) {
        if (pos == n) {
            if (x == 0 || y == 0 || compare_sets(x, y) > 0) return;
            const auto s = CIStatement::make(x, y, z);
            if (ci_holds(s)) out.insert(s);
            return;
        }
        const VarSet bit = single(pos);
        assign(pos + 1, x, y, z);
        assign(pos + 1, x | bit, y, z);
        assign(pos + 1, x, y | bit, z);
        assign(pos + 1, x, y, z | bit);
    };
    assign(0, 0, 0, 0);
    return out;
}

std::string JointDistribution::to_string() const {
    std::ostringstream os;
    for (std::size_t cell = 0; cell < cell_count(); ++cell) {
        const auto assignment = assignment_of(cell);
        bool skip = false;
        if (mode() == NumericMode::exact) {
            skip = exact_prob(cell) == 0;
        } else {
            skip = prob(cell) == 0.0;
        }
        if (skip) continue;
        os << "P(";
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            if (i > 0) os << ",";
            os << vars_[i].name << "=" << assignment[i];
        }
        os << ") = ";
        if (mode() == NumericMode::exact) {
            os << format_rational(exact_prob(cell));
        } else {
            os << prob(cell);
        }
        os << "\n";
    }
    return os.str();
}

bool JointDistribution::operator==(const JointDistribution& other) const {
    return vars_ == other.vars_ && probs_ == other.probs_;
}

}  // namespace causalkit
