#pragma once

#include "cmtheta/errors.hpp"
#include "cmtheta/rational.hpp"
#include "cmtheta/lattice.hpp"
#include "cmtheta/theta.hpp"
#include "cmtheta/pairing.hpp"
#include "cmtheta/eta.hpp"
#include "cmtheta/fourier_jacobi.hpp"
#include "cmtheta/boundary.hpp"
#include "cmtheta/random.hpp"
#include "cmtheta/io.hpp"
#include "cmtheta/harness.hpp"
