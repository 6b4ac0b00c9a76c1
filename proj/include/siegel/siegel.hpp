#pragma once

#include "siegel/error.hpp"
#include "siegel/series.hpp"
#include "siegel/families.hpp"
#include "siegel/rotation.hpp"
#include "siegel/linearize.hpp"
#include "siegel/radius.hpp"
#include "siegel/qanorm.hpp"
#include "siegel/construction.hpp"
