#pragma once

#include "sl2a/numerics/allocator.hpp"
#include "sl2a/numerics/elementwise.hpp"
#include "sl2a/numerics/errors.hpp"
#include "sl2a/numerics/gradient_check.hpp"
#include "sl2a/numerics/image.hpp"
#include "sl2a/numerics/matrix.hpp"
#include "sl2a/numerics/parameter.hpp"
#include "sl2a/numerics/rng.hpp"

#include "sl2a/layers/activation.hpp"
#include "sl2a/layers/fourier.hpp"
#include "sl2a/layers/layer.hpp"
#include "sl2a/layers/layernorm.hpp"
#include "sl2a/layers/linear.hpp"

#include "sl2a/chebyshev/basis.hpp"
#include "sl2a/chebyshev/la_block.hpp"

#include "sl2a/models/checkpoint.hpp"
#include "sl2a/models/network.hpp"
#include "sl2a/models/spec.hpp"

#include "sl2a/training/adam.hpp"
#include "sl2a/training/fit.hpp"
#include "sl2a/training/loss.hpp"
#include "sl2a/training/metrics.hpp"

#include "sl2a/tasks/builtin.hpp"
#include "sl2a/tasks/coords.hpp"
#include "sl2a/tasks/radon.hpp"
#include "sl2a/tasks/spectral.hpp"
#include "sl2a/tasks/spectral_experiment.hpp"
#include "sl2a/tasks/task.hpp"

#include "sl2a/io/config.hpp"
#include "sl2a/io/format.hpp"
#include "sl2a/io/grid.hpp"
#include "sl2a/io/heatmap.hpp"
#include "sl2a/io/pnm.hpp"
#include "sl2a/io/report.hpp"
#include "sl2a/io/run.hpp"
