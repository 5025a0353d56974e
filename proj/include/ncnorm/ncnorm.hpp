#pragma once

#include "ncnorm/checks.hpp"
#include "ncnorm/cl.hpp"
#include "ncnorm/counterexamples.hpp"
#include "ncnorm/io.hpp"
#include "ncnorm/linalg.hpp"
#include "ncnorm/matrix.hpp"
#include "ncnorm/nc.hpp"
#include "ncnorm/order.hpp"
#include "ncnorm/psi.hpp"
#include "ncnorm/random.hpp"
