#pragma once

#include "unorm/integer.hpp"
#include "unorm/linear_combination.hpp"
#include "unorm/formal_product.hpp"
#include "unorm/system.hpp"
#include "unorm/sparse_matrix.hpp"
#include "unorm/smith.hpp"
#include "unorm/lattice.hpp"
#include "unorm/homology.hpp"
#include "unorm/graded_complex.hpp"
#include "unorm/norm_distribution.hpp"
#include "unorm/anderson.hpp"
#include "unorm/resolution.hpp"
#include "unorm/cohomology.hpp"
#include "unorm/config.hpp"
#include "unorm/verify.hpp"
