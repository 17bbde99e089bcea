#pragma once

#include "knfam/errors.hpp"
#include "knfam/rational.hpp"
#include "knfam/param_poly.hpp"
#include "knfam/linear_solve.hpp"
#include "knfam/element.hpp"
#include "knfam/finite_lie_algebra.hpp"
#include "knfam/family.hpp"
#include "knfam/checks.hpp"
#include "knfam/cocycles.hpp"
#include "knfam/cohomology.hpp"
#include "knfam/geometry.hpp"
#include "knfam/deform.hpp"
