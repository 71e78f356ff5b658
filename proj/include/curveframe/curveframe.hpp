#pragma once

// Convenience umbrella: pulls in the whole library.

#include "curveframe/errors.hpp"
#include "curveframe/vec3.hpp"
#include "curveframe/finite_diff.hpp"
#include "curveframe/cubic_spline.hpp"
#include "curveframe/curve.hpp"
#include "curveframe/expression.hpp"
#include "curveframe/profile.hpp"
#include "curveframe/frames.hpp"
#include "curveframe/aw.hpp"
#include "curveframe/synthesis.hpp"
#include "curveframe/io.hpp"
