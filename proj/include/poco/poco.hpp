#pragma once

#include "poco/ast.hpp"
#include "poco/cfg.hpp"
#include "poco/cmin.hpp"
#include "poco/corpus.hpp"
#include "poco/fuzz.hpp"
#include "poco/hierarchy.hpp"
#include "poco/instrument.hpp"
#include "poco/interp.hpp"
#include "poco/metrics.hpp"
#include "poco/parse.hpp"
#include "poco/print.hpp"
#include "poco/reckless.hpp"
#include "poco/report.hpp"
#include "poco/select.hpp"
