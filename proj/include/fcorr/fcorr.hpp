#pragma once

// Umbrella header for the fcorr library.

#include "fcorr/dressed.hpp"
#include "fcorr/errors.hpp"
#include "fcorr/hilbert.hpp"
#include "fcorr/inequalities.hpp"
#include "fcorr/io.hpp"
#include "fcorr/lindblad.hpp"
#include "fcorr/montecarlo.hpp"
#include "fcorr/scan.hpp"
#include "fcorr/sensors.hpp"
#include "fcorr/validate.hpp"
