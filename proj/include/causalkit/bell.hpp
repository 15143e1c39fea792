#ifndef CAUSALKIT_BELL_HPP
#define CAUSALKIT_BELL_HPP

#include <array>

#include "causalkit/distribution.hpp"

namespace causalkit {

// Measurement direction; must be a unit vector within 1e-12.
struct Axis {
    double x = 0.0;
    double y = 0.0;
    double z = 1.0;
};

enum class BellKind { epr, chsh };

// A two-qubit experiment on the state sqrt(p)|+z,+z> + sqrt(1-p)|-z,-z>:
// two measurement axes per wing selected by the setting bits S and T, plus a
// prior over the settings (uniform product by default). Outcomes are mapped
// +1 -> bit 0, -1 -> bit 1.
struct BellSpec {
    double p = 0.5;
    std::array<Axis, 2> left;                                    // axis for S = 0, 1
    std::array<Axis, 2> right;                                   // axis for T = 0, 1
    std::array<double, 4> settings_prior = {0.25, 0.25, 0.25, 0.25};  // P(S,T), index 2*s+t
};

// EPR: both wings measure z or x. CHSH: the right wing measures (z+x)/sqrt2
// or (z-x)/sqrt2 instead.
BellSpec preset_spec(BellKind kind, double p);

// Born-rule table P(A,B | S=s, T=t); rows indexed by A, columns by B.
std::array<std::array<double, 2>, 2> outcome_distribution(const BellSpec& spec, int s, int t);

// P(S,T,A,B) = prior(S,T) * P(A,B | S,T), as a floating JointDistribution
// over variables S, T, A, B.
JointDistribution bell_joint(const BellSpec& spec, double tolerance = 1e-9);

// The +-1 outcome correlator E(s,t).
double correlator(const BellSpec& spec, int s, int t);

// E(0,0) + E(0,1) + E(1,0) - E(1,1); bounded by 2*sqrt(2) in magnitude.
double chsh_value(const BellSpec& spec);

}  // namespace causalkit

#endif  // CAUSALKIT_BELL_HPP
