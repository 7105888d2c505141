#pragma once

// Umbrella header: the whole library in one include.

#include "bench.hpp"
#include "feasible_map.hpp"
#include "linalg.hpp"
#include "measures.hpp"
#include "metrics.hpp"
#include "operator.hpp"
#include "params.hpp"
#include "problem.hpp"
#include "problem_io.hpp"
#include "schedule.hpp"
#include "sets.hpp"
#include "solvers.hpp"
#include "suite.hpp"
