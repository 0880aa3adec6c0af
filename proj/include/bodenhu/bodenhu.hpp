#pragma once

#include "bodenhu/error.hpp"
#include "bodenhu/rational.hpp"
#include "bodenhu/core.hpp"
#include "bodenhu/linear_system.hpp"
#include "bodenhu/weightspace.hpp"
#include "bodenhu/partitions.hpp"
#include "bodenhu/smallness.hpp"
#include "bodenhu/moduli.hpp"
#include "bodenhu/selftest.hpp"
