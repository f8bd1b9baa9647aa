#pragma once

#include "error.hpp"
#include "core.hpp"
#include "oracle.hpp"
#include "sieve.hpp"
#include "pockets.hpp"
#include "verify.hpp"
#include "zeta.hpp"
#include "io.hpp"
#include "checkpoint.hpp"
#include "commands.hpp"
