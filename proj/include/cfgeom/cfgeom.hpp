#pragma once

/// Convenience umbrella for the whole library.

#include "continued_fraction.hpp"
#include "curve_density.hpp"
#include "errors.hpp"
#include "kepler_reconstruct.hpp"
#include "lattice_sail.hpp"
#include "polyline.hpp"
#include "projective.hpp"
#include "quadrature.hpp"
#include "scalar.hpp"
#include "serialize.hpp"
