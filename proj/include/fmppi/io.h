// Copyright 2026 The fmppi Authors
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

#ifndef FMPPI_IO_H_
#define FMPPI_IO_H_

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "fmppi/harness.h"
#include "fmppi/scenarios.h"

namespace fmppi {

// RFC 4180 field: quoted when it contains a comma, quote, CR or LF, with
// embedded quotes doubled.
std::string CsvField(std::string_view text);
// shortest round-trip decimal representation; "inf", "-inf", "nan" otherwise
std::string CsvNumber(double value);
void WriteCsvRow(std::ostream& out, const std::vector<std::string>& fields);

// Inner-tick log. Columns:
//   time, x_<s>..., u_<i>..., ustar_<i>..., sp_<s>..., ref_<s>...,
//   F_<i>_<s>..., packet_age, stale, clearance
// with <s> the state channel names and <i> the input index.
void WriteTickCsv(std::ostream& out, const ClosedLoopLog& log,
                  const std::vector<std::string>& state_names);
// Outer-tick log: time, wall_time, rho, effective_samples, nonfinite
void WriteSolveCsv(std::ostream& out, const ClosedLoopLog& log);
// K, seed, gain_error, spectral_radius, F_<s>...
void WriteGainValidationCsv(std::ostream& out, const GainValidation& result,
                            const std::vector<std::string>& state_names);
// horizon, samples, repeats, mppi_seconds, fmppi_seconds, overhead
void WriteTimingCsv(std::ostream& out, const std::vector<TimingRow>& rows);

std::string MetricsJson(const Metrics& metrics,
                        const std::vector<std::string>& state_names);
std::string ComparisonJson(const ComparisonReport& report,
                           const std::vector<std::string>& state_names);

}  // namespace fmppi

#endif  // FMPPI_IO_H_
