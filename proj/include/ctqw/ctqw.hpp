#pragma once

#include "crb.hpp"
#include "dynamics.hpp"
#include "edge_list.hpp"
#include "error.hpp"
#include "fisher.hpp"
#include "graph.hpp"
#include "harness.hpp"
#include "jacobi.hpp"
#include "matrix.hpp"
#include "parallel.hpp"
#include "periodicity.hpp"
#include "records.hpp"
#include "spectrum.hpp"
#include "walk.hpp"
