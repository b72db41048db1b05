#pragma once

// Umbrella header for the filtered DG monotonization library.

#include "filtdg/amr.hpp"
#include "filtdg/analysis.hpp"
#include "filtdg/benchmarks.hpp"
#include "filtdg/boundary.hpp"
#include "filtdg/config.hpp"
#include "filtdg/errors.hpp"
#include "filtdg/field.hpp"
#include "filtdg/filter.hpp"
#include "filtdg/high_order_operator.hpp"
#include "filtdg/io.hpp"
#include "filtdg/low_order_operator.hpp"
#include "filtdg/mesh.hpp"
#include "filtdg/models.hpp"
#include "filtdg/reference.hpp"
#include "filtdg/runner.hpp"
#include "filtdg/tensor_basis.hpp"
#include "filtdg/time_stepper.hpp"
