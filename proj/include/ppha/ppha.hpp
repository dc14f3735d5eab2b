#pragma once

#include "ppha/analysis.hpp"
#include "ppha/error.hpp"
#include "ppha/grid.hpp"
#include "ppha/io.hpp"
#include "ppha/pph.hpp"
#include "ppha/schemes.hpp"
