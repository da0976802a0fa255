#pragma once

#include "errors.hpp"
#include "exact_linalg.hpp"
#include "random.hpp"
#include "graph.hpp"
#include "graph6.hpp"
#include "matrix_io.hpp"
#include "ortho.hpp"
#include "bigfloat.hpp"
#include "proof_verifier.hpp"
#include "cospectral_search.hpp"
#include "experiments.hpp"
