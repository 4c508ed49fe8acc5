// Umbrella header.
#pragma once

#include "cavent/types.hpp"
#include "cavent/band.hpp"
#include "cavent/propagator.hpp"
#include "cavent/density_matrix.hpp"
#include "cavent/entropy.hpp"
#include "cavent/concurrence.hpp"
#include "cavent/oracle.hpp"
#include "cavent/scenario.hpp"
#include "cavent/sweep.hpp"
#include "cavent/config.hpp"
#include "cavent/io.hpp"
#include "cavent/verify.hpp"
