#pragma once

#include "cbocal/cbo.hpp"
#include "cbocal/cost.hpp"
#include "cbocal/data_io.hpp"
#include "cbocal/dynamics.hpp"
#include "cbocal/errors.hpp"
#include "cbocal/network.hpp"
#include "cbocal/param_space.hpp"
