#pragma once

#include "mclump/bitset.hpp"
#include "mclump/blockcode.hpp"
#include "mclump/chain.hpp"
#include "mclump/errors.hpp"
#include "mclump/graph.hpp"
#include "mclump/io.hpp"
#include "mclump/jointsource.hpp"
#include "mclump/lump.hpp"
#include "mclump/matrix.hpp"
#include "mclump/partition.hpp"
#include "mclump/random.hpp"
