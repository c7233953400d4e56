#pragma once

// Umbrella header.

#include "vortexstir/dynamics.hpp"
#include "vortexstir/equilibria.hpp"
#include "vortexstir/errors.hpp"
#include "vortexstir/io.hpp"
#include "vortexstir/model.hpp"
#include "vortexstir/parallel.hpp"
#include "vortexstir/perturbation.hpp"
#include "vortexstir/protocol.hpp"
#include "vortexstir/types.hpp"
