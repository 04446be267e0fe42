#pragma once

#include "brf/closed_forms.hpp"
#include "brf/core.hpp"
#include "brf/estimation.hpp"
#include "brf/numeric_pdf.hpp"
#include "brf/params.hpp"
#include "brf/sampling.hpp"
#include "brf/special_functions.hpp"
#include "brf/stats.hpp"
