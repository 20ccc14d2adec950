#pragma once

#include "l1sketch/ci1.hpp"
#include "l1sketch/cid.hpp"
#include "l1sketch/densities.hpp"
#include "l1sketch/distance_matrix.hpp"
#include "l1sketch/errors.hpp"
#include "l1sketch/io.hpp"
#include "l1sketch/pipeline.hpp"
#include "l1sketch/polynomial.hpp"
#include "l1sketch/random.hpp"
#include "l1sketch/scale.hpp"
#include "l1sketch/version.hpp"
