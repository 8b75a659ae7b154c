#pragma once

#include "sparsedecomp/combinatorics.hpp"
#include "sparsedecomp/decomposition.hpp"
#include "sparsedecomp/errors.hpp"
#include "sparsedecomp/harness.hpp"
#include "sparsedecomp/io.hpp"
#include "sparsedecomp/jacobi.hpp"
#include "sparsedecomp/matrix.hpp"
#include "sparsedecomp/recovery.hpp"
#include "sparsedecomp/rip.hpp"
#include "sparsedecomp/rng.hpp"
#include "sparsedecomp/simplex.hpp"
#include "sparsedecomp/vector.hpp"
