#pragma once

#include "jbtlab/errors.hpp"
#include "jbtlab/factors.hpp"
#include "jbtlab/geometry.hpp"
#include "jbtlab/grids.hpp"
#include "jbtlab/numerics.hpp"
#include "jbtlab/operators.hpp"
#include "jbtlab/peirce.hpp"
#include "jbtlab/rng.hpp"
#include "jbtlab/synthesis.hpp"
#include "jbtlab/tolerance.hpp"
