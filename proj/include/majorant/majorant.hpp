// Copyright (c) the majorant project contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "majorant/assembly.hpp"
#include "majorant/estimators.hpp"
#include "majorant/experiment.hpp"
#include "majorant/fields.hpp"
#include "majorant/flux_recovery.hpp"
#include "majorant/geometry.hpp"
#include "majorant/manufactured.hpp"
#include "majorant/mesh.hpp"
#include "majorant/problem.hpp"
#include "majorant/quadrature.hpp"
#include "majorant/solver.hpp"
#include "majorant/verification.hpp"
