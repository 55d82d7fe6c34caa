#pragma once

#include "qthermo/errors.hpp"
#include "qthermo/experiment.hpp"
#include "qthermo/gad_channel.hpp"
#include "qthermo/linalg.hpp"
#include "qthermo/optics.hpp"
#include "qthermo/qubit.hpp"
#include "qthermo/thermometry.hpp"
#include "qthermo/tomography.hpp"
