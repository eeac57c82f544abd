#pragma once

#include "mtop/symfun/partition.hpp"
#include "mtop/symfun/schur.hpp"
#include "mtop/symfun/timepoly.hpp"
#include "mtop/symfun/zseries.hpp"
