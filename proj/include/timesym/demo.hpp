#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace timesym {

struct DemoItem {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Reproduces the closed-form results for the double Mach-Zehnder preset:
/// forward and backward evolution, the generalized state, which-path
/// certainties, the spin example, the pointer readings, and the Bohm
/// trajectory statistics. Sampled items use `seed`.
std::vector<DemoItem> run_demo(std::uint64_t seed = 0);

std::string render_demo_text(const std::vector<DemoItem> &items, std::uint64_t seed);
nlohmann::json demo_to_json(const std::vector<DemoItem> &items, std::uint64_t seed);

} // namespace timesym
