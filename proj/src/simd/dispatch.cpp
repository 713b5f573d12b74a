#include "mlsvm/simd.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace mlsvm::simd {

std::string_view to_string(Isa isa) {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
        case Isa::neon: return "neon";
    }
    return "unknown";
}

bool supported(Isa isa) {
    switch (isa) {
        case Isa::scalar: return true;
        case Isa::avx2: return detail::avx2_table() != nullptr && detail::cpu_has_avx2_fma();
        case Isa::neon: return detail::neon_table() != nullptr;
    }
    return false;
}

std::vector<Isa> available() {
    std::vector<Isa> out{Isa::scalar};
    for (Isa isa : {Isa::avx2, Isa::neon})
        if (supported(isa)) out.push_back(isa);
    return out;
}

const KernelTable& table(Isa isa) {
    if (!supported(isa))
        throw std::invalid_argument("SIMD variant not available: " + std::string(to_string(isa)));
    switch (isa) {
        case Isa::avx2: return *detail::avx2_table();
        case Isa::neon: return *detail::neon_table();
        case Isa::scalar: break;
    }
    return detail::scalar_table();
}

namespace {

const KernelTable& select() {
    if (const char* env = std::getenv("MLSVM_SIMD")) {
        const std::string_view want{env};
        for (Isa isa : available())
            if (to_string(isa) == want) return table(isa);
    }
    const auto isas = available();
    return table(isas.back());
}

}  // namespace

const KernelTable& active() {
    static const KernelTable& chosen = select();
    return chosen;
}

}  // namespace mlsvm::simd
