// Copyright 2026 The qtransfer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <vector>

#include "qtr/control_field.hpp"

namespace qtr {

/// Shape summary of one control envelope.  All measures are taken on the
/// intensity |E(t)|^2, so they are insensitive to the sign of the field.
struct PulseDiagnostics {
    Channel label;
    double centroid_fs;     // intensity-weighted mean time
    double fwhm_fs;         // full width at half maximum of the intensity
    double half_lo_fs;      // left and right half-maximum crossings,
    double half_hi_fs;      // clamped to the window edges
    double peak_amplitude;  // max |E|
    double peak_time_fs;
};

enum class PulseOrdering { counterintuitive, intuitive };

struct OrderingReport {
    std::vector<PulseDiagnostics> channels;
    PulseOrdering verdict;
};

/// Throws std::invalid_argument for an all-zero field.
PulseDiagnostics analyze_pulse(const ControlField& field);

/// Diagnostics for every channel plus the ordering verdict: counterintuitive
/// iff the Stokes intensity centroid precedes the pump intensity centroid.
/// Requires a pump and a stokes channel among the fields.
OrderingReport pulse_ordering(const std::vector<ControlField>& fields);

} // namespace qtr
