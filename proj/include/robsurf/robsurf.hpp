#pragma once

#include "robsurf/error.hpp"
#include "robsurf/failure.hpp"
#include "robsurf/graph.hpp"
#include "robsurf/io.hpp"
#include "robsurf/linalg.hpp"
#include "robsurf/metrics.hpp"
#include "robsurf/pca.hpp"
#include "robsurf/run.hpp"
#include "robsurf/spectral.hpp"
#include "robsurf/surface.hpp"
#include "robsurf/version.hpp"
