#pragma once

#include "mtop/qvertex/cbr.hpp"
#include "mtop/qvertex/coeffs.hpp"
#include "mtop/qvertex/eigen.hpp"
#include "mtop/qvertex/hirota.hpp"
#include "mtop/qvertex/laurent.hpp"
#include "mtop/qvertex/master.hpp"
#include "mtop/qvertex/model.hpp"
#include "mtop/qvertex/rmatrix.hpp"
#include "mtop/qvertex/transfer.hpp"
