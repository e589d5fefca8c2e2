#pragma once

#include "mllgames/arena.hpp"
#include "mllgames/completeness.hpp"
#include "mllgames/composition.hpp"
#include "mllgames/corpus.hpp"
#include "mllgames/formula.hpp"
#include "mllgames/game.hpp"
#include "mllgames/position_tree.hpp"
#include "mllgames/proofnet.hpp"
#include "mllgames/semantics.hpp"
#include "mllgames/strategy.hpp"
