#pragma once

#include <utility>
#include <vector>

#include "capgen/capacity.hpp"
#include "capgen/constrained.hpp"
#include "capgen/preferences.hpp"

namespace fixtures {

inline capgen::Mask set(std::initializer_list<int> members) {
    capgen::Mask m = 0;
    for (int c : members) m |= capgen::Mask{1} << (c - 1);
    return m;
}

// Six alternatives on three criteria with a5 > a2, a2 > a3, a6 > a4.
inline capgen::PreferenceSystem three_criteria_prefs() {
    capgen::PreferenceSystem p;
    p.n = 3;
    for (auto v : std::vector<std::vector<double>>{{0.6, 0.8, 0.7}, {0.7, 0.1, 0.8}, {0.4, 0.3, 0.8},
                                                  {0.4, 0.9, 0.7}, {0.9, 0.1, 0.5}, {0.9, 0.4, 0.3}}) {
        p.alternatives.emplace_back(v);
    }
    p.strict = {{4, 1}, {1, 2}, {5, 3}};
    return p;
}

// The five n = 4 order constraints (dominant first), added cumulatively.
inline std::vector<std::pair<capgen::Mask, capgen::Mask>> four_criteria_orders() {
    return {{set({1}), set({2})},
            {set({1, 3}), set({4})},
            {set({2, 3}), set({3, 4})},
            {set({1, 2, 3}), set({2, 4})},
            {set({1, 2, 4}), set({2, 3, 4})}};
}

inline std::vector<capgen::DominancePair> four_criteria_pairs(std::size_t k) {
    std::vector<capgen::DominancePair> out;
    auto all = four_criteria_orders();
    for (std::size_t i = 0; i < k; ++i) out.push_back({all[i].second, all[i].first});
    return out;
}

}  // namespace fixtures
