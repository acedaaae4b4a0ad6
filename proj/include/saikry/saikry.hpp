#ifndef SAIKRY_SAIKRY_HPP
#define SAIKRY_SAIKRY_HPP

#include "saikry/bench.hpp"
#include "saikry/dense.hpp"
#include "saikry/derivative.hpp"
#include "saikry/krylov.hpp"
#include "saikry/lu.hpp"
#include "saikry/matrix_market.hpp"
#include "saikry/problems.hpp"
#include "saikry/shift_opt.hpp"
#include "saikry/sparse.hpp"

#endif  // SAIKRY_SAIKRY_HPP
