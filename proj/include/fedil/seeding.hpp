#pragma once

#include <cstdint>
#include <string_view>

namespace fedil {

// FNV-1a over bytes; used for role-based seed derivation and artifact
// content hashes.
constexpr uint64_t fnv1a64(std::string_view bytes) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

constexpr uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Sub-seed for a named role. The same (master, role) pair always yields the
// same stream, so experiment cells that must share traffic realizations use
// the same role string and nothing else.
constexpr uint64_t derive_seed(uint64_t master_seed, std::string_view role) {
    return splitmix64(master_seed ^ fnv1a64(role));
}

}  // namespace fedil
