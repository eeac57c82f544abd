#pragma once

#include "mtop/rsdyn/bridge.hpp"
#include "mtop/rsdyn/flow.hpp"
#include "mtop/rsdyn/identities.hpp"
#include "mtop/rsdyn/lax.hpp"
