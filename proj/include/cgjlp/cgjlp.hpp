#pragma once

#include "cgjlp/scalar.hpp"
#include "cgjlp/matrix.hpp"
#include "cgjlp/lp_model.hpp"
#include "cgjlp/tableau.hpp"
#include "cgjlp/pivot_engine.hpp"
#include "cgjlp/verify.hpp"
#include "cgjlp/suite.hpp"
#include "cgjlp/io.hpp"
