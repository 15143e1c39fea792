#ifndef CAUSALKIT_CASEBOOK_HPP
#define CAUSALKIT_CASEBOOK_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "causalkit/model.hpp"

namespace causalkit {

// Reference inputs used by several cases and tests.

// Three-bit AND-gate model: A and B uniform, C = A AND B.
CausalModel andgate_model();
// Alternative model over C -> B -> A (plus C -> A) whose joint coincides
// with the AND-gate joint only for these tuned parameters.
CausalModel finetuned_pabc_model();
// Five-variable reference DAG: S -> X, T -> X, W -> X, T -> Y, W -> Y.
Dag reference_dag_stwxy();
// Exact quarter-weighted joint over A, B, C produced by both models above.
JointDistribution pabc_joint();

// No-signalling CI set over S, T, A, B: the semi-graphoid closure of
// (S indep T), (A indep T | S), (B indep S | T).
CISet nosignalling_ci();
// Smoking CI set over S, T, C: the closure of (S indep C | T).
CISet smoking_ci();

// Fine-tuned Bell explanations. Each satisfies both no-signalling statements
// exactly while the corresponding graph leaves them d-connected.
CausalModel superluminal_xor_model();           // S -> B plus hidden pair
CausalModel superluminal_xor_model_biased();    // same, hidden coin at 0.6/0.4
CausalModel superdeterminism_parity_model();    // hidden cause of S, parity trick
CausalModel retrocausal_setting_model();        // S -> hidden -> A and B
CausalModel retrocausal_both_settings_model();  // S and T -> hidden
CausalModel retrocausal_mediator_model();       // S -> mediator -> B

struct RunOptions {
    double tolerance = 1e-9;
    std::uint64_t seed = 1;
};

struct CaseResult {
    std::string name;
    bool pass = true;
    std::vector<std::string> checks;                  // "ok - ..." / "FAIL - ..."
    std::map<std::string, std::string> artifacts;     // filename -> content

    std::string to_text() const;
    std::string to_json() const;
};

std::vector<std::string> case_names();

// Runs one named scenario end to end against its embedded expectations.
// Throws std::invalid_argument for unknown names (message lists the
// registry). Artifacts are returned in-memory; write_artifacts stores them
// under out_dir/<case>/.
CaseResult run_case(const std::string& name, const RunOptions& opts = {});

void write_artifacts(const CaseResult& result, const std::filesystem::path& out_dir);

}  // namespace causalkit

#endif  // CAUSALKIT_CASEBOOK_HPP
