#pragma once

#include "lorank/admm.hpp"
#include "lorank/alm.hpp"
#include "lorank/benchmark.hpp"
#include "lorank/cg.hpp"
#include "lorank/config.hpp"
#include "lorank/diagnostics.hpp"
#include "lorank/driver.hpp"
#include "lorank/errors.hpp"
#include "lorank/generators.hpp"
#include "lorank/lanczos.hpp"
#include "lorank/problem.hpp"
#include "lorank/rank_strategy.hpp"
#include "lorank/report_io.hpp"
#include "lorank/sdpa_io.hpp"
#include "lorank/sparse_sym_matrix.hpp"
#include "lorank/types.hpp"
