#pragma once

// Umbrella header.

#include "vex/common.hpp"
#include "vex/config.hpp"
#include "vex/exponent.hpp"
#include "vex/norms.hpp"
#include "vex/operators.hpp"
#include "vex/quad.hpp"
#include "vex/test_function.hpp"
#include "vex/verify.hpp"
