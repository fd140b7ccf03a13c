#pragma once

// Umbrella header.

#include "factorum/error.hpp"
#include "factorum/rational.hpp"
#include "factorum/graph.hpp"
#include "factorum/degree_constraint.hpp"
#include "factorum/instance.hpp"
#include "factorum/matching.hpp"
#include "factorum/oracles.hpp"
#include "factorum/generators.hpp"
#include "factorum/solver.hpp"
#include "factorum/structural.hpp"
#include "factorum/realizability.hpp"
#include "factorum/instance_io.hpp"
#include "factorum/verify_suites.hpp"
