#pragma once
// Everything at once.

#include <dynamo/error.hpp>
#include <dynamo/model.hpp>
#include <dynamo/chebyshev.hpp>
#include <dynamo/analytic.hpp>
#include <dynamo/perturbation.hpp>
#include <dynamo/numeric.hpp>
#include <dynamo/continuation.hpp>
#include <dynamo/contour.hpp>
#include <dynamo/scan.hpp>
#include <dynamo/config.hpp>
#include <dynamo/output.hpp>
