#pragma once

#include "quadwin/codec.hpp"
#include "quadwin/config.hpp"
#include "quadwin/csv.hpp"
#include "quadwin/errors.hpp"
#include "quadwin/geometry.hpp"
#include "quadwin/icdar.hpp"
#include "quadwin/loss.hpp"
#include "quadwin/matcheval.hpp"
#include "quadwin/ordering.hpp"
#include "quadwin/overlap.hpp"
#include "quadwin/priors.hpp"
#include "quadwin/random.hpp"
