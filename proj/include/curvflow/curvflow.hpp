#pragma once

#include "graph.hpp"
#include "calculus.hpp"
#include "spectral.hpp"
#include "geometry.hpp"
#include "mbo.hpp"
#include "maxflow.hpp"
#include "mcf.hpp"
#include "allen_cahn.hpp"
#include "random.hpp"
#include "generators.hpp"
#include "io.hpp"
#include "experiments.hpp"
