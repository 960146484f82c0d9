#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace otfcl {

using Rng = std::mt19937_64;

// Every random stream is keyed off the root seed, a purpose tag and an index,
// so one knob reproduces a whole run.
std::uint64_t derive_seed(std::uint64_t root, std::string_view purpose, std::uint64_t index = 0);

inline Rng make_rng(std::uint64_t root, std::string_view purpose, std::uint64_t index = 0) {
    return Rng(derive_seed(root, purpose, index));
}

} // namespace otfcl
