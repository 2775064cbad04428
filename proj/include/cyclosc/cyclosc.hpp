#pragma once

#include "cyclosc/errors.hpp"
#include "cyclosc/hill.hpp"
#include "cyclosc/network.hpp"
#include "cyclosc/presets.hpp"
#include "cyclosc/equilibrium.hpp"
#include "cyclosc/linearization.hpp"
#include "cyclosc/criteria.hpp"
#include "cyclosc/stability.hpp"
#include "cyclosc/roots.hpp"
#include "cyclosc/nyquist.hpp"
#include "cyclosc/robust.hpp"
#include "cyclosc/ddesim.hpp"
#include "cyclosc/mps_form.hpp"
#include "cyclosc/parallel.hpp"
#include "cyclosc/regions.hpp"
#include "cyclosc/io.hpp"

namespace cyclosc {

inline constexpr const char *kVersion = "0.1.0";

} // namespace cyclosc
