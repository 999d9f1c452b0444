#pragma once

// Umbrella header: the full phase-diffusion QRNG toolkit.

#include "qrng/calibration.hpp"
#include "qrng/config.hpp"
#include "qrng/entropy.hpp"
#include "qrng/interferometer.hpp"
#include "qrng/params.hpp"
#include "qrng/phase_sim.hpp"
#include "qrng/pipeline.hpp"
#include "qrng/quantizer.hpp"
#include "qrng/report.hpp"
#include "qrng/rng.hpp"
#include "qrng/whitening.hpp"
