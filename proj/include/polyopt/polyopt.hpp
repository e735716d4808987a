#pragma once

// Umbrella header.

#include "polyopt/cse.hpp"
#include "polyopt/emit.hpp"
#include "polyopt/expr_dag.hpp"
#include "polyopt/generators.hpp"
#include "polyopt/horner.hpp"
#include "polyopt/numeric.hpp"
#include "polyopt/op_count.hpp"
#include "polyopt/polynomial.hpp"
#include "polyopt/rng.hpp"
#include "polyopt/search.hpp"
#include "polyopt/sylvester.hpp"
#include "polyopt/variable.hpp"
