#include <cstdlib>
#include <string>

#include "capvor/kernels.hpp"

namespace capvor::kern {

namespace {

bool avx2_usable() {
#if CAPVOR_HAVE_AVX2
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

struct Selection {
    AssignFn fn;
    const char* name;
};

Selection select() {
    const char* env = std::getenv("CAPVOR_KERNEL");
    std::string want = env ? env : "";
#if CAPVOR_HAVE_AVX2
    if (want == "avx2") {
        if (avx2_usable()) return {assign_avx2, "avx2"};
        return {assign_scalar, "scalar"};
    }
#endif
    if (want == "scalar") return {assign_scalar, "scalar"};
#if CAPVOR_HAVE_AVX2
    if (avx2_usable()) return {assign_avx2, "avx2"};
#endif
    return {assign_scalar, "scalar"};
}

const Selection& selection() {
    static const Selection s = select();
    return s;
}

}  // namespace

AssignFn assign_kernel() { return selection().fn; }

std::string assign_kernel_name() { return selection().name; }

}  // namespace capvor::kern
