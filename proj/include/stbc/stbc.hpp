#pragma once

#include "stbc/capacity.hpp"
#include "stbc/channel.hpp"
#include "stbc/clifford.hpp"
#include "stbc/coding_gain.hpp"
#include "stbc/complex_linalg.hpp"
#include "stbc/decoder.hpp"
#include "stbc/design_io.hpp"
#include "stbc/designs.hpp"
#include "stbc/errors.hpp"
#include "stbc/parallel.hpp"
#include "stbc/random.hpp"
#include "stbc/report.hpp"
#include "stbc/simulation.hpp"
