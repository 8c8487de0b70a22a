#pragma once

#include "orthotensor/bench.hpp"
#include "orthotensor/errors.hpp"
#include "orthotensor/io.hpp"
#include "orthotensor/linalg.hpp"
#include "orthotensor/metrics.hpp"
#include "orthotensor/rank_select.hpp"
#include "orthotensor/synth.hpp"
#include "orthotensor/tensor.hpp"
#include "orthotensor/tmhosvd.hpp"
#include "orthotensor/tpm.hpp"
