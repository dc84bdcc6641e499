#pragma once

#include "bilinrank/error.hpp"
#include "bilinrank/random.hpp"
#include "bilinrank/matrix.hpp"
#include "bilinrank/svd.hpp"
#include "bilinrank/design.hpp"
#include "bilinrank/rank.hpp"
#include "bilinrank/sectors.hpp"
#include "bilinrank/experiments.hpp"
