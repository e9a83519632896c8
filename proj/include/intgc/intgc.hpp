// Umbrella header.
#pragma once

#include "intgc/algebra.hpp"
#include "intgc/closure.hpp"
#include "intgc/filtration.hpp"
#include "intgc/formula.hpp"
#include "intgc/io.hpp"
#include "intgc/kripke.hpp"
#include "intgc/parser.hpp"
#include "intgc/search.hpp"
#include "intgc/world_set.hpp"
