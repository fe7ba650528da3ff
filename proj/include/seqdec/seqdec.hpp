#pragma once

#include "seqdec/bounds.hpp"
#include "seqdec/channel.hpp"
#include "seqdec/codes.hpp"
#include "seqdec/config.hpp"
#include "seqdec/decoders.hpp"
#include "seqdec/errors.hpp"
#include "seqdec/experiment.hpp"
#include "seqdec/numerics.hpp"
#include "seqdec/trellis.hpp"
#include "seqdec/validation.hpp"
