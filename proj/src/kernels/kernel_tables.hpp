#pragma once

#include "pws/kernels.hpp"

namespace pws::kernels::detail {

// Backend tables are defined unconditionally inside their own translation
// units; the dispatcher only calls them after a CPU feature check.
const KernelTable& avx2_table_unchecked();
const KernelTable& neon_table_unchecked();

}  // namespace pws::kernels::detail
