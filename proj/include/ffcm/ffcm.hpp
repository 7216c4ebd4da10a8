#pragma once

#include "ffcm/arcs.hpp"
#include "ffcm/cyclo.hpp"
#include "ffcm/ergodic.hpp"
#include "ffcm/errors.hpp"
#include "ffcm/expsum.hpp"
#include "ffcm/field.hpp"
#include "ffcm/functionals.hpp"
#include "ffcm/grid.hpp"
#include "ffcm/inverse.hpp"
#include "ffcm/io.hpp"
#include "ffcm/normal_form.hpp"
#include "ffcm/operators.hpp"
#include "ffcm/poly.hpp"
#include "ffcm/run_config.hpp"
#include "ffcm/suites.hpp"
#include "ffcm/tail_series.hpp"
#include "ffcm/util.hpp"
