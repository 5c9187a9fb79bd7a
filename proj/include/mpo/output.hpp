#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "mpo/app.hpp"
#include "mpo/noise.hpp"
#include "mpo/steady_state.hpp"
#include "mpo/threshold.hpp"

namespace mpo {

using Metadata = std::vector<std::pair<std::string, std::string>>;

// "# key: value" lines ahead of a CSV header.
void write_metadata(std::ostream& os, const Metadata& meta);

std::string format_double(double x);

void write_steady_csv(std::ostream& os, const SteadyState& s, const Metadata& meta);
std::string steady_json(const SteadyState& s, const Metadata& meta);

void write_sweep_csv(std::ostream& os, const SweepResult& r, const Metadata& meta);
std::string sweep_json(const SweepResult& r, const Metadata& meta);

// Flat object: alpha_critical, ed2_threshold, residual, feasible, floor (+ condition).
std::string threshold_json(const ThresholdResult& t);
void write_threshold_csv(std::ostream& os, const ThresholdResult& t, const Metadata& meta);
std::string threshold_schema_json();

void write_spectrum_csv(std::ostream& os, const MonteCarloResult& r, const Metadata& meta);
std::string spectrum_json(const MonteCarloResult& r, const Metadata& meta);

void write_linewidth_csv(std::ostream& os, const LinewidthReport& r, const Metadata& meta);
std::string linewidth_json(const LinewidthReport& r, const Metadata& meta);

// Amplitude vs alpha with the closed-form curve; optional profile insert.
std::string sweep_svg(const SweepResult& r);
std::string profile_svg(const SteadyState& s);

}  // namespace mpo
