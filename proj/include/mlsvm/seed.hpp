#pragma once

#include <cstdint>
#include <string_view>

namespace mlsvm {

/// Sub-seed for a named component: splitmix64(master ^ fnv1a(name)).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view component) {
    std::uint64_t h = 14695981039346656037ull;
    for (char ch : component) {
        h ^= static_cast<unsigned char>(ch);
        h *= 1099511628211ull;
    }
    std::uint64_t z = master ^ h;
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view component,
                                    std::uint64_t index) {
    return derive_seed(derive_seed(master, component) + index, "#");
}

}  // namespace mlsvm
