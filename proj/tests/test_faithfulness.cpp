#include <doctest.h>

#include <cmath>

#include "causalkit/bell.hpp"
#include "causalkit/casebook.hpp"
#include "causalkit/faithfulness.hpp"
#include "causalkit/rng.hpp"

using namespace causalkit;

namespace {

Rational r(long long num, long long den = 1) { return Rational(num, den); }

const CIStatement kNoSignalRight = CIStatement::make(single(3), single(0), single(1));

}  // namespace

TEST_CASE("the AND-gate model is faithful, the tuned alternative is not") {
    const PerturbOptions quick{40, r(1, 10), 11};
    const auto natural = classify_independences(andgate_model(), VarSet{0b111}, quick);
    CHECK(natural.faithful);
    REQUIRE(natural.statements.size() == 1);
    CHECK(natural.statements.front().origin == CiOrigin::structural);
    CHECK(natural.statements.front().survival == 1.0);

    const auto tuned = classify_independences(finetuned_pabc_model(), VarSet{0b111}, quick);
    CHECK_FALSE(tuned.faithful);
    REQUIRE(tuned.statements.size() == 1);
    CHECK(tuned.statements.front().origin == CiOrigin::fine_tuned);
    CHECK(tuned.statements.front().survival <= 0.05);
}

TEST_CASE("structural independences survive any seed and magnitude") {
    for (std::uint64_t seed : {1ULL, 17ULL, 99ULL}) {
        const double survival = perturbation_stability(
            andgate_model(), CIStatement::make(single(0), single(1), 0), 30, r(1, 4), seed);
        CHECK(survival == 1.0);
    }
}

TEST_CASE("zero magnitude means no perturbation") {
    const double survival = perturbation_stability(
        andgate_model(), CIStatement::make(single(0), single(1), 0), 5, r(0), 3);
    CHECK(survival == 1.0);
}

TEST_CASE("the hidden-coin superluminal model is fine-tuned") {
    const CausalModel model = superluminal_xor_model();
    const JointDistribution joint = joint_from_model(model);
    CHECK(joint.ci_holds(kNoSignalRight));

    const PerturbOptions quick{30, r(1, 10), 5};
    const auto report = classify_independences(model, VarSet{0b1111}, quick);
    CHECK_FALSE(report.faithful);
    bool fine_tuned = false;
    for (const auto& entry : report.statements) {
        if (entry.statement == kNoSignalRight) {
            fine_tuned = entry.origin == CiOrigin::fine_tuned;
            CHECK(entry.survival <= 0.05);
        }
    }
    CHECK(fine_tuned);

    const auto ok = signalling_check(model);
    CHECK(ok.at("left"));
    CHECK(ok.at("right"));
    const auto biased = signalling_check(superluminal_xor_model_biased());
    CHECK(biased.at("left"));
    CHECK_FALSE(biased.at("right"));
}

TEST_CASE("the parity superdeterminism model hides the signal until perturbed") {
    const CausalModel model = superdeterminism_parity_model();
    CHECK(joint_from_model(model).ci_holds(kNoSignalRight));
    const auto ok = signalling_check(model);
    CHECK(ok.at("left"));
    CHECK(ok.at("right"));
    const auto broken = signalling_check(perturb_model(model, r(1, 10), 1234));
    CHECK_FALSE(broken.at("right"));
}

TEST_CASE("the retrocausal models hide the signal until perturbed") {
    int index = 0;
    for (const CausalModel& model : {retrocausal_setting_model(), retrocausal_both_settings_model(),
                                     retrocausal_mediator_model()}) {
        CAPTURE(index);
        CHECK(joint_from_model(model).ci_holds(kNoSignalRight));
        const auto ok = signalling_check(model);
        CHECK(ok.at("left"));
        CHECK(ok.at("right"));
        const auto broken = signalling_check(perturb_model(model, r(1, 10), 777 + index));
        CHECK((!broken.at("left") || !broken.at("right")));
        const PerturbOptions quick{20, r(1, 10), 9};
        CHECK_FALSE(classify_independences(model, VarSet{0b1111}, quick).faithful);
        ++index;
    }
}

TEST_CASE("signalling roles are resolved by name") {
    const CausalModel no_roles = andgate_model();
    CHECK_THROWS_AS(signalling_check(no_roles), std::invalid_argument);
}

TEST_CASE("a quantum joint wrapped as an empirical model does not signal") {
    const JointDistribution joint = bell_joint(preset_spec(BellKind::chsh, 0.4));
    const Dag complete({"S", "T", "A", "B"},
                       {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
    const CausalModel wrapped = fit_model(complete, joint);
    const auto ok = signalling_check(wrapped);
    CHECK(ok.at("left"));
    CHECK(ok.at("right"));
    // Inside the complete wrapper the no-signalling statement is carried by
    // the parameters alone, so floating-mode perturbation destroys it.
    const double survival = perturbation_stability(
        wrapped, CIStatement::make(single(2), single(1), single(0)), 20, r(1, 10), 6);
    CHECK(survival <= 0.05);
}

TEST_CASE("the triple cause copies a coin while pairwise confounders cannot") {
    const GapSearchResult result = expressive_gap_demo(pairwise_cause_structure(),
                                                       triple_cause_structure(), 2, 50, 7, 150);
    CHECK(result.triple_max == 1.0);
    CHECK(result.pairwise_max < 1.0);
    CHECK(result.pairwise_max >= 0.5);
}

TEST_CASE("the deterministic exhaustive pairwise maximum is one half") {
    CHECK(pairwise_deterministic_max() == r(1, 2));
}

TEST_CASE("balanced agreement is one exactly on the half-half distribution") {
    std::vector<Rational> probs(8, Rational(0));
    probs[0] = r(1, 2);
    probs[7] = r(1, 2);
    const auto perfect = JointDistribution::exact({{"X", 2}, {"Y", 2}, {"Z", 2}}, std::move(probs));
    CHECK(balanced_agreement(perfect) == 1.0);
    std::vector<Rational> point(8, Rational(0));
    point[0] = r(1);
    const auto constant = JointDistribution::exact({{"X", 2}, {"Y", 2}, {"Z", 2}}, std::move(point));
    CHECK(balanced_agreement(constant) == 0.0);
}

TEST_CASE("faithfulness reports serialize with stable keys") {
    const PerturbOptions quick{5, r(1, 10), 2};
    const auto report = classify_independences(andgate_model(), VarSet{0b111}, quick);
    const std::string text = report.to_text();
    CHECK(text.find("statement | verdict | survival") != std::string::npos);
    CHECK(text.find("overall: faithful") != std::string::npos);
    const std::string json = report.to_json();
    CHECK(json.find("\"faithful\": true") != std::string::npos);
    CHECK(report.to_json() == json);
}
