#pragma once

#include "hybridsim/corpus.hpp"
#include "hybridsim/embed.hpp"
#include "hybridsim/error.hpp"
#include "hybridsim/evalmetrics.hpp"
#include "hybridsim/fusion.hpp"
#include "hybridsim/lexsim.hpp"
#include "hybridsim/matrix.hpp"
#include "hybridsim/neural/checkpoint.hpp"
#include "hybridsim/neural/gradcheck.hpp"
#include "hybridsim/neural/siamese.hpp"
#include "hybridsim/neural/train.hpp"
#include "hybridsim/pipeline.hpp"
#include "hybridsim/random.hpp"

#define HYBRIDSIM_VERSION "0.1.0"
