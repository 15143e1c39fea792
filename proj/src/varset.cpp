#include "causalkit/varset.hpp"

#include <stdexcept>

namespace causalkit {

VarSet set_of(const std::vector<int>& indices) {
    VarSet s = 0;
    for (int i : indices) {
        if (i < 0 || i >= kMaxVars) throw std::invalid_argument("variable index out of range");
        s |= single(i);
    }
    return s;
}

std::vector<int> set_indices(VarSet set) {
    std::vector<int> out;
    for (int i = 0; i < kMaxVars; ++i) {
        if (contains(set, i)) out.push_back(i);
    }
    return out;
}

int compare_sets(VarSet a, VarSet b) {
    if (a == b) return 0;
    while (a != 0 && b != 0) {
        const int ia = __builtin_ctz(a);
        const int ib = __builtin_ctz(b);
        if (ia != ib) return ia < ib ? -1 : 1;
        a &= a - 1;
        b &= b - 1;
    }
    if (a == 0 && b == 0) return 0;
    return a == 0 ? -1 : 1;
}

std::string set_names(VarSet set, const std::vector<std::string>& names) {
    if (set == 0) return "{}";
    std::string out;
    for (int i : set_indices(set)) {
        if (!out.empty()) out += ",";
        out += names.at(static_cast<std::size_t>(i));
    }
    return out;
}

}  // namespace causalkit
