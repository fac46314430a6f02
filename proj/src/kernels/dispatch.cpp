#include <cstdlib>
#include <string_view>

#include "letf/error.hpp"
#include "letf/kernels.hpp"

namespace letf::kernels {
namespace {

constexpr KernelTable kScalar{Isa::Scalar, &scalar::compound_ce, &scalar::ar1, &scalar::ar_garch,
                              &scalar::aggregate};
#if defined(LETF_WITH_AVX2)
constexpr KernelTable kAvx2{Isa::Avx2, &avx2::compound_ce, &avx2::ar1, &avx2::ar_garch,
                            &avx2::aggregate};
#endif

const KernelTable& resolve() {
    if (const char* env = std::getenv("LETF_KERNELS"); env && std::string_view(env) == "scalar")
        return kScalar;
    if (isa_available(Isa::Avx2)) return table_for(Isa::Avx2);
    return kScalar;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
    }
    return "unknown";
}

bool isa_available(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar: return true;
        case Isa::Avx2:
#if defined(LETF_WITH_AVX2)
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
    }
    return false;
}

const KernelTable& table_for(Isa isa) {
    if (!isa_available(isa))
        throw_config("isa-unavailable", std::string(isa_name(isa)) + " kernels not available");
#if defined(LETF_WITH_AVX2)
    if (isa == Isa::Avx2) return kAvx2;
#endif
    return kScalar;
}

const KernelTable& active() {
    static const KernelTable& table = resolve();
    return table;
}

}  // namespace letf::kernels
