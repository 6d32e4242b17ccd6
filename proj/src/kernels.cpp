#include "glyphbeam/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace glyphbeam::kern {
namespace {

struct Selection {
    const Ops* ops;
    const char* name;
};

Selection select() {
    const char* forced = std::getenv("GLYPHBEAM_KERNELS");
    if (forced != nullptr && std::strcmp(forced, "scalar") == 0) {
        return {&scalar_ops(), "scalar"};
    }
#if defined(__x86_64__) || defined(_M_X64)
    if (forced != nullptr && std::strcmp(forced, "avx2") == 0 && avx2_available()) {
        return {&avx2_ops(), "avx2"};
    }
    if (forced == nullptr && avx2_available()) {
        return {&avx2_ops(), "avx2"};
    }
#endif
    return {&scalar_ops(), "scalar"};
}

const Selection& selection() {
    static const Selection s = select();
    return s;
}

} // namespace

const Ops& active() { return *selection().ops; }

const char* active_name() { return selection().name; }

} // namespace glyphbeam::kern
