#pragma once

#include "levycox/dataset.hpp"
#include "levycox/diagnostics.hpp"
#include "levycox/errors.hpp"
#include "levycox/fit.hpp"
#include "levycox/hazard_path.hpp"
#include "levycox/limit_functionals.hpp"
#include "levycox/posterior.hpp"
#include "levycox/prior.hpp"
#include "levycox/quadrature.hpp"
#include "levycox/risk_sets.hpp"
#include "levycox/rng.hpp"
