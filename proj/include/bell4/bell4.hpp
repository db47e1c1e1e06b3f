#pragma once

#include "bell4/qubit_algebra.hpp"
#include "bell4/bell_ops.hpp"
#include "bell4/correlation.hpp"
#include "bell4/states.hpp"
#include "bell4/optimize.hpp"
#include "bell4/classify.hpp"
#include "bell4/io.hpp"
#include "bell4/commands.hpp"
