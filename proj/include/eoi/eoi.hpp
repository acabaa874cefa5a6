#pragma once

#include "eoi/rng.hpp"
#include "eoi/matrix.hpp"
#include "eoi/linalg.hpp"
#include "eoi/givens.hpp"
#include "eoi/sparse_ortho.hpp"
#include "eoi/sampler.hpp"
#include "eoi/density_model.hpp"
#include "eoi/conv.hpp"
#include "eoi/allocators.hpp"
#include "eoi/ai.hpp"
#include "eoi/mlp.hpp"
#include "eoi/spectrum.hpp"
#include "eoi/bench.hpp"
#include "eoi/io.hpp"
