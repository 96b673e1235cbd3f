#pragma once

// Umbrella header.

#include <golu/activation.hpp>
#include <golu/bench.hpp>
#include <golu/checkpoint.hpp>
#include <golu/csv.hpp>
#include <golu/datasets.hpp>
#include <golu/distributions.hpp>
#include <golu/errors.hpp>
#include <golu/gates.hpp>
#include <golu/gradcheck.hpp>
#include <golu/kernels.hpp>
#include <golu/landscape.hpp>
#include <golu/micronet.hpp>
#include <golu/quadrature.hpp>
#include <golu/ranking.hpp>
#include <golu/rng.hpp>
#include <golu/special.hpp>
#include <golu/stats.hpp>
#include <golu/tensor.hpp>
#include <golu/train.hpp>
#include <golu/variance.hpp>
#include <golu/weight_stats.hpp>
