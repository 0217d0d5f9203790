#pragma once

#include "hyperspec/csrh.hpp"
#include "hyperspec/hypergraph.hpp"
#include "hyperspec/oracles.hpp"
#include "hyperspec/ranking.hpp"
#include "hyperspec/tensor_ops.hpp"
