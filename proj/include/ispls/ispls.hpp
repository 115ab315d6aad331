#pragma once

#include "ispls/csv.hpp"
#include "ispls/engine.hpp"
#include "ispls/errors.hpp"
#include "ispls/harness.hpp"
#include "ispls/linalg.hpp"
#include "ispls/rng.hpp"
#include "ispls/sbpls.hpp"
#include "ispls/simulate.hpp"
#include "ispls/stream_io.hpp"
#include "ispls/threshold.hpp"
#include "ispls/tracking.hpp"
