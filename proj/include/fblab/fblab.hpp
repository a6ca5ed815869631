#pragma once

// Umbrella header: the whole laboratory for the one-dimensional parabolic
// free-boundary problem with flux condition u_x = alpha at the front.

#include "fblab/arrhenius.hpp"
#include "fblab/csv.hpp"
#include "fblab/erfc.hpp"
#include "fblab/fbsolver.hpp"
#include "fblab/hermite.hpp"
#include "fblab/interpolate.hpp"
#include "fblab/laplace.hpp"
#include "fblab/quadrature.hpp"
#include "fblab/selfsim.hpp"
#include "fblab/source.hpp"
#include "fblab/svg.hpp"
#include "fblab/tridiag.hpp"
