#ifndef TBMC_TBMC_HPP
#define TBMC_TBMC_HPP

// Convenience header pulling in the whole library.

#include "altmin.hpp"
#include "binmat.hpp"
#include "complete.hpp"
#include "error.hpp"
#include "eval.hpp"
#include "heuristics.hpp"
#include "io.hpp"
#include "lp_rank1.hpp"
#include "oracle.hpp"
#include "random.hpp"
#include "synth.hpp"
#include "tiling.hpp"

#endif
