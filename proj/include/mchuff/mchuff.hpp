#pragma once

#include <mchuff/codec.hpp>
#include <mchuff/core.hpp>
#include <mchuff/errors.hpp>
#include <mchuff/heuristics.hpp>
#include <mchuff/huffman.hpp>
#include <mchuff/rational.hpp>
#include <mchuff/search.hpp>
#include <mchuff/tree.hpp>
