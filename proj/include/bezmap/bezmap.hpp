#pragma once

#include "bezmap/bezier.hpp"
#include "bezmap/camera.hpp"
#include "bezmap/errors.hpp"
#include "bezmap/evaluate.hpp"
#include "bezmap/gengt.hpp"
#include "bezmap/io.hpp"
#include "bezmap/losses.hpp"
#include "bezmap/map_model.hpp"
#include "bezmap/metrics.hpp"
#include "bezmap/polyline.hpp"
#include "bezmap/raster.hpp"
#include "bezmap/stats.hpp"
#include "bezmap/svg.hpp"
#include "bezmap/synth.hpp"
#include "bezmap/vec2.hpp"
