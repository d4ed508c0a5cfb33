#pragma once

#include "abclll/bigint.hpp"
#include "abclll/errors.hpp"
#include "abclll/lattice.hpp"
#include "abclll/numt.hpp"
#include "abclll/search.hpp"
#include "abclll/triples.hpp"
