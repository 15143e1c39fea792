#include <doctest.h>

#include <cmath>

#include "causalkit/bell.hpp"
#include "causalkit/rng.hpp"

using namespace causalkit;

namespace {

// Independent oracle for the state sqrt(p)|00> + sqrt(1-p)|11>: the
// correlator is mz nz + 2 sqrt(p(1-p)) (mx nx - my ny) and the single-wing
// marginal of outcome +1 is (1 + (2p-1) mz) / 2.
double oracle_correlator(double p, const Axis& m, const Axis& n) {
    return m.z * n.z + 2.0 * std::sqrt(p * (1.0 - p)) * (m.x * n.x - m.y * n.y);
}

double oracle_marginal_plus(double p, const Axis& m) { return 0.5 * (1.0 + (2.0 * p - 1.0) * m.z); }

Axis random_axis(Rng& rng) {
    const double z = 2.0 * rng.unit() - 1.0;
    const double phi = 2.0 * 3.14159265358979323846 * rng.unit();
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return Axis{r * std::cos(phi), r * std::sin(phi), z};
}

}  // namespace

TEST_CASE("presets reject out-of-range weights and bad axes") {
    CHECK_THROWS_AS(preset_spec(BellKind::epr, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(preset_spec(BellKind::chsh, 1.5), std::invalid_argument);
    BellSpec spec = preset_spec(BellKind::epr, 0.5);
    spec.left[0] = Axis{0.5, 0.0, 0.5};
    CHECK_THROWS_AS(outcome_distribution(spec, 0, 0), std::invalid_argument);
}

TEST_CASE("equal settings on the symmetric state correlate perfectly") {
    const BellSpec spec = preset_spec(BellKind::epr, 0.5);
    for (int s = 0; s < 2; ++s) {
        const auto table = outcome_distribution(spec, s, s);
        CHECK(std::abs(table[0][0] + table[1][1] - 1.0) <= 1e-12);
        CHECK(std::abs(table[0][1]) <= 1e-12);
        CHECK(std::abs(table[1][0]) <= 1e-12);
    }
}

TEST_CASE("different settings on the symmetric state are uncorrelated") {
    const BellSpec spec = preset_spec(BellKind::epr, 0.5);
    for (const auto& [s, t] : {std::pair<int, int>{0, 1}, std::pair<int, int>{1, 0}}) {
        const auto table = outcome_distribution(spec, s, t);
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) CHECK(std::abs(table[a][b] - 0.25) <= 1e-12);
        }
    }
}

TEST_CASE("the tilted settings agree with probability one half plus one over two root two") {
    const BellSpec spec = preset_spec(BellKind::chsh, 0.5);
    const double agree = 0.5 + 0.5 / std::sqrt(2.0);
    for (int s = 0; s < 2; ++s) {
        for (int t = 0; t < 2; ++t) {
            const auto table = outcome_distribution(spec, s, t);
            const double same = table[0][0] + table[1][1];
            if (s == 1 && t == 1) {
                CHECK(std::abs(1.0 - same - agree) <= 1e-9);
            } else {
                CHECK(std::abs(same - agree) <= 1e-9);
            }
        }
    }
    CHECK(std::abs(chsh_value(spec) - 2.0 * std::sqrt(2.0)) <= 1e-9);
}

TEST_CASE("the straight settings reach the classical combination value zero") {
    // E(0,0) = E(1,1) = 1 and the cross terms vanish, so the fixed
    // combination evaluates to 0 on the symmetric state.
    const BellSpec spec = preset_spec(BellKind::epr, 0.5);
    CHECK(std::abs(correlator(spec, 0, 0) - 1.0) <= 1e-12);
    CHECK(std::abs(correlator(spec, 1, 1) - 1.0) <= 1e-12);
    CHECK(std::abs(correlator(spec, 0, 1)) <= 1e-12);
    CHECK(std::abs(chsh_value(spec)) <= 1e-9);
}

TEST_CASE("projector tables match the closed-form correlator oracle") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        Rng rng(mix_seed(seed, 0xbe11));
        BellSpec spec;
        spec.p = rng.unit();
        spec.left = {random_axis(rng), random_axis(rng)};
        spec.right = {random_axis(rng), random_axis(rng)};
        for (int s = 0; s < 2; ++s) {
            for (int t = 0; t < 2; ++t) {
                const Axis& m = spec.left[static_cast<std::size_t>(s)];
                const Axis& n = spec.right[static_cast<std::size_t>(t)];
                const auto table = outcome_distribution(spec, s, t);
                CHECK(std::abs(correlator(spec, s, t) - oracle_correlator(spec.p, m, n)) <= 1e-12);
                const double marginal_a = table[0][0] + table[0][1];
                CHECK(std::abs(marginal_a - oracle_marginal_plus(spec.p, m)) <= 1e-12);
                double total = 0.0;
                for (int a = 0; a < 2; ++a) {
                    for (int b = 0; b < 2; ++b) {
                        CHECK(table[a][b] >= -1e-12);
                        total += table[a][b];
                    }
                }
                CHECK(std::abs(total - 1.0) <= 1e-12);
            }
        }
    }
}

TEST_CASE("no signalling holds analytically for every spec") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        Rng rng(mix_seed(seed, 0x0517));
        BellSpec spec;
        spec.p = rng.unit();
        spec.left = {random_axis(rng), random_axis(rng)};
        spec.right = {random_axis(rng), random_axis(rng)};
        for (int s = 0; s < 2; ++s) {
            const auto t0 = outcome_distribution(spec, s, 0);
            const auto t1 = outcome_distribution(spec, s, 1);
            for (int a = 0; a < 2; ++a) {
                CHECK(std::abs((t0[a][0] + t0[a][1]) - (t1[a][0] + t1[a][1])) <= 1e-12);
            }
        }
        for (int t = 0; t < 2; ++t) {
            const auto s0 = outcome_distribution(spec, 0, t);
            const auto s1 = outcome_distribution(spec, 1, t);
            for (int b = 0; b < 2; ++b) {
                CHECK(std::abs((s0[0][b] + s0[1][b]) - (s1[0][b] + s1[1][b])) <= 1e-12);
            }
        }
    }
}

TEST_CASE("every spec respects the quantum bound on the combination") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        Rng rng(mix_seed(seed, 0x75));
        BellSpec spec;
        spec.p = rng.unit();
        spec.left = {random_axis(rng), random_axis(rng)};
        spec.right = {random_axis(rng), random_axis(rng)};
        CHECK(std::abs(chsh_value(spec)) <= 2.0 * std::sqrt(2.0) + 1e-9);
    }
}

TEST_CASE("away from the symmetric state the degenerate independences vanish") {
    const auto joint = bell_joint(preset_spec(BellKind::epr, 0.4));
    CHECK_FALSE(joint.ci_holds(CIStatement::make(single(2), single(0), 0)));  // A vs S
    CHECK_FALSE(joint.ci_holds(CIStatement::make(single(3), single(1), 0)));  // B vs T
    const auto symmetric = bell_joint(preset_spec(BellKind::epr, 0.5));
    CHECK(symmetric.ci_holds(CIStatement::make(single(2), single(0), 0)));
}

TEST_CASE("the product state factorizes completely") {
    const auto joint = bell_joint(preset_spec(BellKind::chsh, 1.0));
    CHECK(joint.ci_holds(CIStatement::make(single(0), single(1), 0)));
    CHECK(joint.ci_holds(CIStatement::make(single(2), single(3), single(0) | single(1))));
    CHECK(joint.ci_holds(CIStatement::make(single(2), single(1) | single(3), single(0))));
    CHECK(joint.ci_holds(CIStatement::make(single(3), single(0) | single(2), single(1))));
    CHECK(std::abs(chsh_value(preset_spec(BellKind::chsh, 1.0))) <= 2.0);
}

TEST_CASE("the joint weights tables by the settings prior") {
    BellSpec spec = preset_spec(BellKind::chsh, 0.4);
    spec.settings_prior = {0.4, 0.1, 0.2, 0.3};
    const auto joint = bell_joint(spec);
    const auto st = joint.marginalize(std::vector<std::string>{"S", "T"});
    CHECK(std::abs(st.prob(0) - 0.4) <= 1e-12);
    CHECK(std::abs(st.prob(1) - 0.1) <= 1e-12);
    CHECK(std::abs(st.prob(2) - 0.2) <= 1e-12);
    CHECK(std::abs(st.prob(3) - 0.3) <= 1e-12);
}
