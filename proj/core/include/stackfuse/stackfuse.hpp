#pragma once

#include "stackfuse/activation.hpp"
#include "stackfuse/csv_io.hpp"
#include "stackfuse/dataset.hpp"
#include "stackfuse/errors.hpp"
#include "stackfuse/eval.hpp"
#include "stackfuse/fusion.hpp"
#include "stackfuse/gradient.hpp"
#include "stackfuse/idx_io.hpp"
#include "stackfuse/lopo.hpp"
#include "stackfuse/mlp.hpp"
#include "stackfuse/model_io.hpp"
#include "stackfuse/report.hpp"
#include "stackfuse/rng.hpp"
#include "stackfuse/rprop.hpp"
#include "stackfuse/split.hpp"
#include "stackfuse/synth.hpp"
#include "stackfuse/train.hpp"
