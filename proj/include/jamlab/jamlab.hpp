// Umbrella header.
#pragma once

#include "jamlab/cone.hpp"
#include "jamlab/correlations.hpp"
#include "jamlab/loops.hpp"
#include "jamlab/minkowski.hpp"
#include "jamlab/quantum.hpp"
#include "jamlab/rng.hpp"
#include "jamlab/runner.hpp"
#include "jamlab/scenario.hpp"
