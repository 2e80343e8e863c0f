#pragma once

// umbrella header

#include "pmt/analysis.hpp"
#include "pmt/circline.hpp"
#include "pmt/complex_sphere.hpp"
#include "pmt/errors.hpp"
#include "pmt/moebius.hpp"
#include "pmt/partition.hpp"
#include "pmt/pmt_map.hpp"
#include "pmt/presets.hpp"
#include "pmt/raster.hpp"
#include "pmt/report.hpp"
#include "pmt/scene.hpp"
#include "pmt/spiderweb.hpp"
#include "pmt/sweep.hpp"
