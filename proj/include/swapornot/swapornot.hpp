#pragma once

// Swap-or-not small-domain cipher: domains, the cipher loop, PRF-backed round
// material, security bounds, the exact mixing lab and the FPE layer.

#include "swapornot/bounds.hpp"
#include "swapornot/cipher.hpp"
#include "swapornot/domain.hpp"
#include "swapornot/fpe.hpp"
#include "swapornot/mixing.hpp"
#include "swapornot/prf.hpp"
#include "swapornot/round_function.hpp"
#include "swapornot/u128.hpp"
#include "swapornot/uniform.hpp"
