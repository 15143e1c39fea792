#ifndef CAUSALKIT_VARSET_HPP
#define CAUSALKIT_VARSET_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace causalkit {

// A set of variable indices as a bitmask. Everything in this project runs at
// desk scale; kMaxVars keeps index arithmetic honest.
using VarSet = std::uint32_t;

inline constexpr int kMaxVars = 30;

inline VarSet single(int index) { return VarSet{1} << index; }

inline bool contains(VarSet set, int index) { return (set >> index) & 1u; }

inline bool is_subset(VarSet a, VarSet b) { return (a & ~b) == 0; }

inline int set_size(VarSet set) { return __builtin_popcount(set); }

VarSet set_of(const std::vector<int>& indices);

std::vector<int> set_indices(VarSet set);

// Lexicographic comparison of the ascending index sequences; used for the
// canonical ordering of CI statements and enumeration output.
int compare_sets(VarSet a, VarSet b);

// Renders as comma-joined names, "{}" when empty.
std::string set_names(VarSet set, const std::vector<std::string>& names);

}  // namespace causalkit

#endif  // CAUSALKIT_VARSET_HPP
