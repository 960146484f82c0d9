#include "otfcl/rng.hpp"

namespace otfcl {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

std::uint64_t derive_seed(std::uint64_t root, std::string_view purpose, std::uint64_t index) {
    // FNV-1a over the tag, then mixed with the root and index.
    std::uint64_t tag = 0xcbf29ce484222325ULL;
    for (unsigned char c : purpose) {
        tag = (tag ^ c) * 0x100000001b3ULL;
    }
    return splitmix64(splitmix64(root ^ tag) + index);
}

} // namespace otfcl
