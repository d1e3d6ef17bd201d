#pragma once

#include "analysis.hpp"
#include "chebyshev.hpp"
#include "errors.hpp"
#include "galerkin.hpp"
#include "lbfgs.hpp"
#include "linalg.hpp"
#include "perforation.hpp"
#include "profile.hpp"
#include "reference_tables.hpp"
#include "static_solver.hpp"
#include "tfc.hpp"
