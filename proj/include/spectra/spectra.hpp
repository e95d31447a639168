// spectra.hpp — umbrella header for the model and oracle layers.
// The CLI layer (spectra/cli/*.hpp) additionally needs nlohmann/json.

#pragma once

#include "spectra/errors.hpp"
#include "spectra/five_level.hpp"
#include "spectra/four_level.hpp"
#include "spectra/numerics.hpp"
#include "spectra/oracle.hpp"
