#pragma once

#if defined(__GLIBC__)
#include <malloc.h>
#endif

namespace sl2a {

/// Keeps freed blocks in the process heap instead of handing them back to the
/// kernel. Training allocates and frees the same large temporaries every step;
/// with glibc defaults each of them is a fresh mapping that page-faults on
/// first touch. No-op on other C libraries. Call once at program start.
inline void retain_freed_memory()
{
#if defined(__GLIBC__)
    mallopt(M_MMAP_MAX, 0);
    mallopt(M_TRIM_THRESHOLD, 1 << 30);
    mallopt(M_TOP_PAD, 64 << 20);
#endif
}

}  // namespace sl2a
