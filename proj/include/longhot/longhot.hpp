#pragma once

// Umbrella header: the whole transport benchmark in one include.

#include "longhot/bench.hpp"
#include "longhot/distance.hpp"
#include "longhot/env.hpp"
#include "longhot/episode.hpp"
#include "longhot/geometry.hpp"
#include "longhot/grid.hpp"
#include "longhot/mapping.hpp"
#include "longhot/metrics.hpp"
#include "longhot/planning.hpp"
#include "longhot/policy.hpp"
#include "longhot/rng.hpp"
#include "longhot/scene_gen.hpp"
#include "longhot/scene_io.hpp"
#include "longhot/scores.hpp"
#include "longhot/trace.hpp"
#include "longhot/visibility.hpp"
