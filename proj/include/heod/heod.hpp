// Umbrella header.
#pragma once

#include "heod/commands.hpp"
#include "heod/config.hpp"
#include "heod/dyson.hpp"
#include "heod/encoding.hpp"
#include "heod/errors.hpp"
#include "heod/liouville.hpp"
#include "heod/models.hpp"
#include "heod/propagation.hpp"
#include "heod/reports.hpp"
#include "heod/sweep.hpp"
#include "heod/transforms.hpp"
