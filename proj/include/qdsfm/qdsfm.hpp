#pragma once

#include "qdsfm/diagnostics.hpp"
#include "qdsfm/error.hpp"
#include "qdsfm/problem.hpp"
#include "qdsfm/projection.hpp"
#include "qdsfm/random.hpp"
#include "qdsfm/solvers.hpp"
#include "qdsfm/submodular.hpp"
#include "qdsfm/trace.hpp"
#include "qdsfm/weight_matrix.hpp"

#include "qdsfm/applications/experiment.hpp"
#include "qdsfm/applications/hypergraph.hpp"
#include "qdsfm/applications/pagerank.hpp"
#include "qdsfm/applications/ssl.hpp"
#include "qdsfm/applications/sweep_cut.hpp"
#include "qdsfm/applications/synthetic.hpp"
#include "qdsfm/applications/tabular.hpp"
