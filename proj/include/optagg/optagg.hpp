#pragma once

// Umbrella header.

#include "optagg/aggregator.hpp"
#include "optagg/bessel.hpp"
#include "optagg/envelope.hpp"
#include "optagg/errors.hpp"
#include "optagg/fft.hpp"
#include "optagg/filter.hpp"
#include "optagg/format.hpp"
#include "optagg/io.hpp"
#include "optagg/link.hpp"
#include "optagg/modulator.hpp"
#include "optagg/pipeline.hpp"
#include "optagg/receiver.hpp"
#include "optagg/rng.hpp"
#include "optagg/scenario.hpp"
#include "optagg/transmitter.hpp"
#include "optagg/tuner.hpp"
#include "optagg/version.hpp"
