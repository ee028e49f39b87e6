#ifndef WCBAYES_WCBAYES_HPP
#define WCBAYES_WCBAYES_HPP

#include "wcbayes/error.hpp"
#include "wcbayes/gaussian.hpp"
#include "wcbayes/lowerbound.hpp"
#include "wcbayes/moments.hpp"
#include "wcbayes/optimize.hpp"
#include "wcbayes/upperbound.hpp"
#include "wcbayes/witness.hpp"

#endif
