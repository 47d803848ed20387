#pragma once

#include "angular.hpp"
#include "cavity.hpp"
#include "constants.hpp"
#include "errors.hpp"
#include "fock.hpp"
#include "lanczos.hpp"
#include "potential.hpp"
#include "rabi.hpp"
#include "radial.hpp"
#include "shifts.hpp"
