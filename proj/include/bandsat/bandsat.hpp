#pragma once

#include "bandsat/bandit.hpp"
#include "bandsat/decimation.hpp"
#include "bandsat/dense_set.hpp"
#include "bandsat/generator.hpp"
#include "bandsat/rng.hpp"
#include "bandsat/scoring.hpp"
#include "bandsat/solver.hpp"
#include "bandsat/state.hpp"
#include "bandsat/suite.hpp"
#include "bandsat/wcnf.hpp"
