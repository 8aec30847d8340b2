#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace natstrat {

/// Per-agent location indices plus the full variable valuation (globals first, then locals).
struct GlobalState {
  std::vector<int> locations;
  std::vector<int> values;

  friend bool operator==(const GlobalState&, const GlobalState&) = default;
};

struct GlobalStateHash {
  std::size_t operator()(const GlobalState& s) const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    auto mix = [&h](int v) {
      h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    };
    for (int v : s.locations) mix(v);
    mix(-1);
    for (int v : s.values) mix(v);
    return h;
  }
};

}  // namespace natstrat
