#include "causalkit/bell.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace causalkit {

namespace {

using Complex = std::complex<double>;
using Mat2 = std::array<std::array<Complex, 2>, 2>;

void check_axis(const Axis& axis) {
    const double norm2 = axis.x * axis.x + axis.y * axis.y + axis.z * axis.z;
    if (std::abs(std::sqrt(norm2) - 1.0) > 1e-12) {
        throw std::invalid_argument("measurement axis must be a unit vector");
    }
}

void check_spec(const BellSpec& spec) {
    if (spec.p < 0.0 || spec.p > 1.0) throw std::invalid_argument("state weight p must be in [0, 1]");
    for (const auto& axis : spec.left) check_axis(axis);
    for (const auto& axis : spec.right) check_axis(axis);
    double total = 0.0;
    for (double w : spec.settings_prior) {
        if (w < 0.0) throw std::invalid_argument("settings prior entries must be nonnegative");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw std::invalid_argument("settings prior must sum to 1");
    }
}

// Spin projector (I + sign * axis . sigma) / 2 for sign = +1 (bit 0) or -1
// (bit 1).
Mat2 spin_projector(const Axis& axis, int outcome_bit) {
    const double a = outcome_bit == 0 ? 1.0 : -1.0;
    Mat2 out;
    out[0][0] = Complex(0.5 * (1.0 + a * axis.z), 0.0);
    out[0][1] = Complex(0.5 * a * axis.x, -0.5 * a * axis.y);
    out[1][0] = Complex(0.5 * a * axis.x, 0.5 * a * axis.y);
    out[1][1] = Complex(0.5 * (1.0 - a * axis.z), 0.0);
    return out;
}

}  // namespace

BellSpec preset_spec(BellKind kind, double p) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("state weight p must be in [0, 1]");
    const Axis z_axis{0.0, 0.0, 1.0};
    const Axis x_axis{1.0, 0.0, 0.0};
    const double r = 1.0 / std::sqrt(2.0);
    BellSpec spec;
    spec.p = p;
    spec.left = {z_axis, x_axis};
    if (kind == BellKind::epr) {
        spec.right = {z_axis, x_axis};
    } else {
        spec.right = {Axis{r, 0.0, r}, Axis{-r, 0.0, r}};
    }
    return spec;
}

std::array<std::array<double, 2>, 2> outcome_distribution(const BellSpec& spec, int s, int t) {
    check_spec(spec);
    if (s < 0 || s > 1 || t < 0 || t > 1) throw std::invalid_argument("settings are bits");

    // State amplitudes over |A-wing qubit, B-wing qubit>.
    const std::array<Complex, 4> psi = {Complex(std::sqrt(spec.p), 0.0), Complex(0.0, 0.0),
                                        Complex(0.0, 0.0), Complex(std::sqrt(1.0 - spec.p), 0.0)};

    std::array<std::array<double, 2>, 2> table;
    for (int a = 0; a < 2; ++a) {
        const Mat2 pl = spin_projector(spec.left[static_cast<std::size_t>(s)], a);
        for (int b = 0; b < 2; ++b) {
            const Mat2 pr = spin_projector(spec.right[static_cast<std::size_t>(t)], b);
            // <psi| (PL tensor PR) |psi>
            Complex value(0.0, 0.0);
            for (int j = 0; j < 2; ++j) {
                for (int k = 0; k < 2; ++k) {
                    for (int l = 0; l < 2; ++l) {
                        for (int m = 0; m < 2; ++m) {
                            value += std::conj(psi[static_cast<std::size_t>(2 * j + k)]) *
                                     pl[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)] *
                                     pr[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)] *
                                     psi[static_cast<std::size_t>(2 * l + m)];
                        }
                    }
                }
            }
            double prob = value.real();
            if (prob < 0.0 && prob > -1e-12) prob = 0.0;
            table[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = prob;
        }
    }
    return table;
}

JointDistribution bell_joint(const BellSpec& spec, double tolerance) {
    check_spec(spec);
    std::vector<double> probs(16, 0.0);
    for (int s = 0; s < 2; ++s) {
        for (int t = 0; t < 2; ++t) {
            const auto table = outcome_distribution(spec, s, t);
            const double prior = spec.settings_prior[static_cast<std::size_t>(2 * s + t)];
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) {
                    probs[static_cast<std::size_t>(((s * 2 + t) * 2 + a) * 2 + b)] =
                        prior * table[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
                }
            }
        }
    }
    return JointDistribution::floating(
        {Variable{"S", 2}, Variable{"T", 2}, Variable{"A", 2}, Variable{"B", 2}},
        std::move(probs), tolerance);
}

double correlator(const BellSpec& spec, int s, int t) {
    const auto table = outcome_distribution(spec, s, t);
    return table[0][0] + table[1][1] - table[0][1] - table[1][0];
}

double chsh_value(const BellSpec& spec) {
    return correlator(spec, 0, 0) + correlator(spec, 0, 1) + correlator(spec, 1, 0) -
           correlator(spec, 1, 1);
}

}  // namespace causalkit
