#pragma once

#include "invstar/scalar.hpp"
#include "invstar/poly.hpp"
#include "invstar/parse.hpp"
#include "invstar/operators.hpp"
#include "invstar/unknowns.hpp"
#include "invstar/constraints.hpp"
#include "invstar/associativity.hpp"
#include "invstar/nogo.hpp"
#include "invstar/report.hpp"
#include "invstar/replay.hpp"
