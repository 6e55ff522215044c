#pragma once

#include "ifsprobe/analysis.hpp"
#include "ifsprobe/circle.hpp"
#include "ifsprobe/construction.hpp"
#include "ifsprobe/error.hpp"
#include "ifsprobe/geometry.hpp"
#include "ifsprobe/maps.hpp"
#include "ifsprobe/packing.hpp"
#include "ifsprobe/report.hpp"
#include "ifsprobe/rng.hpp"
