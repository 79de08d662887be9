/*
 * This code is part of gpcmix.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef GPCMIX_GPCMIX_HPP
#define GPCMIX_GPCMIX_HPP

#include "gpcmix/analysis.hpp"
#include "gpcmix/channels.hpp"
#include "gpcmix/chanspec.hpp"
#include "gpcmix/errors.hpp"
#include "gpcmix/expr.hpp"
#include "gpcmix/linalg.hpp"
#include "gpcmix/mub.hpp"
#include "gpcmix/repro.hpp"

#endif
