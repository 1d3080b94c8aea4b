#ifndef INVMOD_INVMOD_HPP
#define INVMOD_INVMOD_HPP

#include "invmod/arith.hpp"
#include "invmod/bignat.hpp"
#include "invmod/counting.hpp"
#include "invmod/lifting.hpp"
#include "invmod/oracle.hpp"
#include "invmod/report.hpp"
#include "invmod/thresholds.hpp"
#include "invmod/tuning.hpp"
#include "invmod/word_inverse.hpp"

#endif  // INVMOD_INVMOD_HPP
