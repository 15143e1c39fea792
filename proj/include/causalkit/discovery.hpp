#ifndef CAUSALKIT_DISCOVERY_HPP
#define CAUSALKIT_DISCOVERY_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "causalkit/ci.hpp"
#include "causalkit/graph.hpp"
#include "causalkit/pattern.hpp"

namespace causalkit {

// Smallest predecessor subset S with (y indep predecessors \ S | S) in `ci`;
// ties broken lexicographically. The full predecessor set always qualifies.
VarSet minimal_parent_set(const CISet& ci, int y, const std::vector<int>& predecessors);

// Ordering-enumeration discovery without latent variables: for every total
// order consistent with the constraints, assign each variable its minimal
// predecessor parent set, then deduplicate the resulting DAGs. `ci` must be
// semi-graphoid closed over the given variables.
std::vector<Dag> wermuth_lauritzen(const CISet& ci, const std::vector<std::string>& variables,
                                   const std::vector<std::pair<int, int>>& order_constraints = {});

// Keeps exactly the DAGs whose d-separation CI set equals `ci`.
std::vector<Dag> filter_faithful(const std::vector<Dag>& dags, const CISet& ci);

enum class LatentMode { pairwise, unrestricted };

// Brute-force enumeration of every latent structure (acyclic directed edges
// among the observed variables plus latent common causes) whose d-separation
// CI set over the observed variables equals `ci`. This is the oracle the
// pattern algorithm is validated against. Guarded to at most 4 observed
// variables.
std::vector<LatentStructure> enumerate_latent_structures(const CISet& ci,
                                                         const std::vector<std::string>& observed,
                                                         LatentMode mode, int max_latents);

// Constraint-based pattern discovery with latent variables: skeleton from CI
// adjacency, collider orientation at unshielded triples via the separator
// test, then mark propagation. Returns nullopt when no faithful latent
// structure exists for `ci`.
std::optional<Pattern> icstar_pattern(const CISet& ci, const std::vector<std::string>& observed);

}  // namespace causalkit

#endif  // CAUSALKIT_DISCOVERY_HPP
