// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "lisce/channel.hpp"
#include "lisce/cli.hpp"
#include "lisce/config.hpp"
#include "lisce/crlb.hpp"
#include "lisce/csv.hpp"
#include "lisce/errors.hpp"
#include "lisce/estimators.hpp"
#include "lisce/harness.hpp"
#include "lisce/linalg.hpp"
#include "lisce/random_stream.hpp"
#include "lisce/signal.hpp"
#include "lisce/types.hpp"
#include "lisce/version.hpp"
