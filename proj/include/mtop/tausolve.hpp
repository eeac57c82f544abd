#pragma once

#include "mtop/tausolve/backlund.hpp"
#include "mtop/tausolve/casorati.hpp"
#include "mtop/tausolve/checks.hpp"
#include "mtop/tausolve/construct.hpp"
#include "mtop/tausolve/model.hpp"
#include "mtop/tausolve/taufunction.hpp"
