#pragma once

// Synthetic raw logs on the grid12 topology (1 s ticks, 120 s) for the three
// judge verdicts. Values are noise-free so the expected verdicts are exact.

#include <vector>

#include "gasdetect/model.hpp"

namespace gasdetect::fixture {

// Every node steps from 100 to a higher plateau over 20 s starting at t = 40;
// the rise differs in height per node but not in shape.
std::vector<Sample> environmental_ramp();

// B0 alone shows three triangular spikes, 20 s apart; everything else is flat.
std::vector<Sample> triple_spike();

// A0 and the node above it (A1) rise together at t = 40; everything else is flat.
std::vector<Sample> vertical_pair();

// Every node carries the same arbitrary wave (used for localness checks).
std::vector<Sample> identical_everywhere(unsigned seed);

}  // namespace gasdetect::fixture
