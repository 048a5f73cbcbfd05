#ifndef FBSDE_FBSDE_HPP
#define FBSDE_FBSDE_HPP

#include "fbsde/acceptance.hpp"
#include "fbsde/bsde.hpp"
#include "fbsde/config.hpp"
#include "fbsde/errors.hpp"
#include "fbsde/estimators.hpp"
#include "fbsde/grid.hpp"
#include "fbsde/mckean_vlasov.hpp"
#include "fbsde/model.hpp"
#include "fbsde/oracles.hpp"
#include "fbsde/parallel.hpp"
#include "fbsde/path.hpp"
#include "fbsde/report.hpp"
#include "fbsde/rng.hpp"
#include "fbsde/runner.hpp"
#include "fbsde/stats.hpp"
#include "fbsde/weights.hpp"

#endif  // FBSDE_FBSDE_HPP
