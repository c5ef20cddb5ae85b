#pragma once

#include "netprune/error.hpp"
#include "netprune/framework.hpp"
#include "netprune/generate.hpp"
#include "netprune/geom.hpp"
#include "netprune/hiprob.hpp"
#include "netprune/io.hpp"
#include "netprune/nets.hpp"
#include "netprune/problems/common.hpp"
#include "netprune/problems/connectivity.hpp"
#include "netprune/problems/kcenter.hpp"
#include "netprune/problems/kth_distance.hpp"
#include "netprune/problems/nearest_neighbor.hpp"
#include "netprune/problems/nonzero.hpp"
#include "netprune/problems/sketch_problems.hpp"
#include "netprune/sketch.hpp"
