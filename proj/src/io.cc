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

#include "fmppi/io.h"

#include <charconv>
#include <cmath>

#include "json.hpp"

namespace fmppi {
namespace {

using nlohmann::ordered_json;

ordered_json PerChannel(const Vector& values,
                        const std::vector<std::string>& names) {
  ordered_json out = ordered_json::object();
  for (int i = 0; i < values.size(); ++i) out[names.at(i)] = values[i];
  return out;
}

ordered_json ToJson(const Metrics& m, const std::vector<std::string>& names) {
  ordered_json j;
  j["rmse"] = PerChannel(m.rmse, names);
  j["mae"] = PerChannel(m.mae, names);
  j["tracking_mae"] = m.tracking_mae;
  j["input_total_variation"] = m.input_total_variation;
  j["goal_reach_time"] =
      m.goal_reach_time ? ordered_json(*m.goal_reach_time) : ordered_json();
  j["collisions"] = m.collisions;
  j["min_clearance"] = std::isfinite(m.min_clearance)
                           ? ordered_json(m.min_clearance)
                           : ordered_json();
  j["stale_ticks"] = m.stale_ticks;
  j["mean_solve_time"] = m.mean_solve_time;
  j["failed"] = m.failed;
  j["failure"] = m.failure;
  return j;
}

}  // namespace

std::string CsvField(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(text);
  }
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

std::string CsvNumber(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

void WriteCsvRow(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << CsvField(fields[i]);
  }
  out << "\r\n";
}

void WriteTickCsv(std::ostream& out, const ClosedLoopLog& log,
                  const std::vector<std::string>& names) {
  const int nx = static_cast<int>(names.size());
  const int nu = log.ticks.empty() ? 0 : log.ticks.front().input.size();
  std::vector<std::string> header = {"time"};
  for (const auto& s : names) header.push_back("x_" + s);
  for (int i = 0; i < nu; ++i) header.push_back("u_" + std::to_string(i));
  for (int i = 0; i < nu; ++i) header.push_back("ustar_" + std::to_string(i));
  for (const auto& s : names) header.push_back("sp_" + s);
  for (const auto& s : names) header.push_back("ref_" + s);
  for (int i = 0; i < nu; ++i) {
    for (const auto& s : names) {
      header.push_back("F_" + std::to_string(i) + "_" + s);
    }
  }
  header.insert(header.end(), {"packet_age", "stale", "clearance"});
  WriteCsvRow(out, header);

  std::vector<std::string> row;
  for (const TickRecord& r : log.ticks) {
    row.clear();
    row.push_back(CsvNumber(r.time));
    for (int i = 0; i < nx; ++i) row.push_back(CsvNumber(r.state[i]));
    for (int i = 0; i < nu; ++i) row.push_back(CsvNumber(r.input[i]));
    for (int i = 0; i < nu; ++i) row.push_back(CsvNumber(r.u_star[i]));
    for (int i = 0; i < nx; ++i) row.push_back(CsvNumber(r.setpoint[i]));
    for (int i = 0; i < nx; ++i) row.push_back(CsvNumber(r.reference[i]));
    for (int i = 0; i < nu; ++i) {
      for (int j = 0; j < nx; ++j) row.push_back(CsvNumber(r.gain(i, j)));
    }
    row.push_back(CsvNumber(r.packet_age));
    row.push_back(r.stale ? "1" : "0");
    row.push_back(CsvNumber(r.clearance));
    WriteCsvRow(out, row);
  }
}

void WriteSolveCsv(std::ostream& out, const ClosedLoopLog& log) {
  WriteCsvRow(out, {"time", "wall_time", "rho", "effective_samples",
                    "nonfinite"});
  for (const SolveRecord& s : log.solves) {
    WriteCsvRow(out, {CsvNumber(s.time), CsvNumber(s.wall_time),
                      CsvNumber(s.rho), CsvNumber(s.effective_samples),
                      std::to_string(s.nonfinite)});
  }
}

void WriteGainValidationCsv(std::ostream& out, const GainValidation& result,
                            const std::vector<std::string>& names) {
  std::vector<std::string> header = {"K", "seed", "gain_error",
                                     "spectral_radius"};
  for (const auto& s : names) header.push_back("F_" + s);
  WriteCsvRow(out, header);
  for (const GainValidationRow& r : result.rows) {
    std::vector<std::string> row = {std::to_string(r.samples),
                                    std::to_string(r.seed),
                                    CsvNumber(r.gain_error),
                                    CsvNumber(r.spectral_radius)};
    for (int j = 0; j < r.gain.cols(); ++j) row.push_back(CsvNumber(r.gain(0, j)));
    WriteCsvRow(out, row);
  }
}

void WriteTimingCsv(std::ostream& out, const std::vector<TimingRow>& rows) {
  WriteCsvRow(out, {"horizon", "samples", "repeats", "mppi_seconds",
                    "fmppi_seconds", "overhead"});
  for (const TimingRow& r : rows) {
    WriteCsvRow(out, {std::to_string(r.horizon), std::to_string(r.samples),
                      std::to_string(r.repeats), CsvNumber(r.mppi_seconds),
                      CsvNumber(r.fmppi_seconds), CsvNumber(r.Overhead())});
  }
}

std::string MetricsJson(const Metrics& metrics,
                        const std::vector<std::string>& names) {
  return ToJson(metrics, names).dump(2) + "\n";
}

std::string ComparisonJson(const ComparisonReport& report,
                           const std::vector<std::string>& names) {
  ordered_json j;
  j["scenario"] = report.scenario;
  j["entries"] = ordered_json::array();
  for (const ComparisonEntry& e : report.entries) {
    ordered_json entry;
    entry["label"] = e.variant.Label();
    entry["controller"] = std::string(ToString(e.variant.mode));
    entry["outer_rate"] = e.variant.outer_rate;
    entry["median_tracking_mae"] = e.MedianTrackingMae();
    entry["median_input_total_variation"] = e.MedianTotalVariation();
    ordered_json median_rmse = ordered_json::object();
    for (std::size_t c = 0; c < names.size(); ++c) {
      median_rmse[names[c]] = e.MedianRmse(static_cast<int>(c));
    }
    entry["median_rmse"] = median_rmse;
    entry["runs"] = ordered_json::array();
    for (std::size_t i = 0; i < e.seeds.size(); ++i) {
      ordered_json run = ToJson(e.metrics[i], names);
      run["seed"] = e.seeds[i];
      entry["runs"].push_back(run);
    }
    j["entries"].push_back(entry);
  }
  return j.dump(2) + "\n";
}

}  // namespace fmppi
