#pragma once

// C1 cubic Hermite finite elements for 1D optimal control with pointwise
// bounds on the derivative of the state.

#include "analysis.hpp"
#include "assembly.hpp"
#include "band_matrix.hpp"
#include "errors.hpp"
#include "hermite_space.hpp"
#include "mesh.hpp"
#include "piecewise.hpp"
#include "problem_io.hpp"
#include "problems.hpp"
#include "quadrature.hpp"
#include "study.hpp"
#include "vi_solver.hpp"
