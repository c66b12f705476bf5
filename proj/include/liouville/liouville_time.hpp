#pragma once

#include "liouville/errors.hpp"
#include "liouville/grid.hpp"
#include "liouville/liouville.hpp"
#include "liouville/profiles.hpp"
#include "liouville/semigroup.hpp"
#include "liouville/time_op.hpp"
