#pragma once

#include "mmfd/disc1d.hpp"
#include "mmfd/disc2d.hpp"
#include "mmfd/discretization.hpp"
#include "mmfd/errors.hpp"
#include "mmfd/harness.hpp"
#include "mmfd/integrator.hpp"
#include "mmfd/linops.hpp"
#include "mmfd/mesh1d.hpp"
#include "mmfd/mesh2d.hpp"
#include "mmfd/problems.hpp"
#include "mmfd/quadrature.hpp"
#include "mmfd/system.hpp"
#include "mmfd/time_grid.hpp"
