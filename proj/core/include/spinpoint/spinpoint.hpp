#pragma once

#include "spinpoint/bands.hpp"
#include "spinpoint/device.hpp"
#include "spinpoint/errors.hpp"
#include "spinpoint/extension.hpp"
#include "spinpoint/scattering.hpp"
#include "spinpoint/sweep.hpp"
