#pragma once

#include "cbound/bounds.hpp"
#include "cbound/cluster.hpp"
#include "cbound/graphs.hpp"
#include "cbound/mayer.hpp"
#include "cbound/philox.hpp"
#include "cbound/potentials.hpp"
#include "cbound/summation.hpp"
