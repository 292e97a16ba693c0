#pragma once

// Umbrella header.

#include "histree/counting.hpp"
#include "histree/dot.hpp"
#include "histree/execution.hpp"
#include "histree/generators.hpp"
#include "histree/history_tree.hpp"
#include "histree/model.hpp"
#include "histree/oracle.hpp"
#include "histree/trace_io.hpp"
#include "histree/view.hpp"
