#pragma once

#include "bsod/baselines.hpp"
#include "bsod/bench.hpp"
#include "bsod/cluster1d.hpp"
#include "bsod/datasets.hpp"
#include "bsod/detector.hpp"
#include "bsod/error.hpp"
#include "bsod/graph.hpp"
#include "bsod/point_set.hpp"
#include "bsod/spectral.hpp"
#include "bsod/io.hpp"
