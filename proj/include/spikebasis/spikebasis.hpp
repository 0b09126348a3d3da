#pragma once

// Umbrella header: closed-form marginal laws, cost functionals and basis
// search for spike processes under orthonormal, volume-preserving and
// general invertible dictionaries.

#include "spikebasis/basis.hpp"
#include "spikebasis/costs.hpp"
#include "spikebasis/errors.hpp"
#include "spikebasis/io.hpp"
#include "spikebasis/matrix.hpp"
#include "spikebasis/process.hpp"
#include "spikebasis/quadrature.hpp"
#include "spikebasis/rng.hpp"
#include "spikebasis/search.hpp"
#include "spikebasis/verify.hpp"
