#pragma once

#include "lrt/beta_oracle.hpp"
#include "lrt/errors.hpp"
#include "lrt/io.hpp"
#include "lrt/linalg.hpp"
#include "lrt/rng.hpp"
#include "lrt/simulation.hpp"
#include "lrt/specfun.hpp"
#include "lrt/statistics.hpp"
