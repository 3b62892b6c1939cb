#pragma once

// Convenience umbrella for the whole library.

#include "graphglove/analysis.hpp"
#include "graphglove/common.hpp"
#include "graphglove/cooccurrence.hpp"
#include "graphglove/dense_embedding.hpp"
#include "graphglove/evaluation.hpp"
#include "graphglove/manifest.hpp"
#include "graphglove/shortest_paths.hpp"
#include "graphglove/sparse_adam.hpp"
#include "graphglove/stochastic_graph.hpp"
#include "graphglove/trainer.hpp"
#include "graphglove/vocabulary.hpp"
