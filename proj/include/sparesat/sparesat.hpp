#pragma once

#include "sparesat/config.hpp"
#include "sparesat/constants.hpp"
#include "sparesat/cost.hpp"
#include "sparesat/evaluate.hpp"
#include "sparesat/generate.hpp"
#include "sparesat/inplane.hpp"
#include "sparesat/optimize.hpp"
#include "sparesat/orbital.hpp"
#include "sparesat/parking.hpp"
#include "sparesat/poisson.hpp"
#include "sparesat/quadrature.hpp"
#include "sparesat/scenario.hpp"
#include "sparesat/simulate.hpp"
