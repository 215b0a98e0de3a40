#pragma once

// Umbrella header for the library (everything except the CLI and HTTP layers).

#include "argelicit/correction.hpp"
#include "argelicit/error.hpp"
#include "argelicit/evalharness.hpp"
#include "argelicit/framework.hpp"
#include "argelicit/random.hpp"
#include "argelicit/rationality.hpp"
#include "argelicit/refinement.hpp"
#include "argelicit/sampling.hpp"
#include "argelicit/semantics.hpp"
