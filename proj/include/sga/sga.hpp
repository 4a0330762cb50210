#pragma once

// Umbrella header for the SAR image-formation toolkit. The PNG quicklook
// writer lives in sga/quicklook.hpp and needs libpng.

#include "sga/error.hpp"
#include "sga/parallel.hpp"
#include "sga/geometry.hpp"
#include "sga/raster.hpp"
#include "sga/fft.hpp"
#include "sga/interp.hpp"
#include "sga/echosim.hpp"
#include "sga/rangeproc.hpp"
#include "sga/polarfmt.hpp"
#include "sga/azcomp.hpp"
#include "sga/pipeline.hpp"
#include "sga/analysis.hpp"
#include "sga/io.hpp"
