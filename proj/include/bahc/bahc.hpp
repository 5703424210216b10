#pragma once

// Bayesian log-Bayes-factor similarity measures for the agglomerative
// hierarchical clustering of dependent multivariate normal variables, with
// mutual-information and linkage baselines, evaluation metrics and a
// synthetic benchmark harness.

#include "bahc/ahc.hpp"
#include "bahc/benchmark.hpp"
#include "bahc/error.hpp"
#include "bahc/gamma.hpp"
#include "bahc/hierarchy.hpp"
#include "bahc/hyper.hpp"
#include "bahc/measures.hpp"
#include "bahc/metrics.hpp"
#include "bahc/partition.hpp"
#include "bahc/rng.hpp"
#include "bahc/scatter.hpp"
#include "bahc/simgen.hpp"
#include "bahc/sym_matrix.hpp"
