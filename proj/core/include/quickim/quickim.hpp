#pragma once

#include "quickim/defaults.hpp"
#include "quickim/error.hpp"
#include "quickim/eval.hpp"
#include "quickim/graph.hpp"
#include "quickim/oracle.hpp"
#include "quickim/score.hpp"
#include "quickim/select.hpp"
#include "quickim/synthetic.hpp"
#include "quickim/update.hpp"
#include "quickim/verify.hpp"
