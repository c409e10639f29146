#pragma once

#include "heatcap/attributes.hpp"
#include "heatcap/captioner.hpp"
#include "heatcap/classifier.hpp"
#include "heatcap/colornames.hpp"
#include "heatcap/config.hpp"
#include "heatcap/error.hpp"
#include "heatcap/overlay.hpp"
#include "heatcap/pipeline.hpp"
#include "heatcap/raster.hpp"
#include "heatcap/raster_io.hpp"
#include "heatcap/reasoning.hpp"
#include "heatcap/segmentation.hpp"
#include "heatcap/service.hpp"
