#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "fracwell/evolve.hpp"
#include "fracwell/functionals.hpp"
#include "fracwell/trace.hpp"

namespace fracwell {

// Shortest decimal string that parses back to the same double.
std::string format_double(double x);
double parse_double(std::string_view s);

inline constexpr const char* kTraceHeader = "t,J,I,l2h,lp1,ut_l2h,diss,F,drift";
inline constexpr const char* kDeltaHeader = "delta,d_of_delta";

std::string trace_csv(const Trace& trace);
Trace parse_trace_csv(const std::string& text);
void write_trace_csv(const std::filesystem::path& path, const Trace& trace);
Trace read_trace_csv(const std::filesystem::path& path);

void write_d_curve_csv(const std::filesystem::path& path, const std::vector<DeltaPoint>& curve);
std::vector<DeltaPoint> read_d_curve_csv(const std::filesystem::path& path);

// Text snapshot: '#' header lines with grid metadata and time, then `x re im` per node.
void write_snapshot(const std::filesystem::path& path, const Snapshot& snap);
Snapshot read_snapshot(const std::filesystem::path& path);

using Report = std::vector<std::pair<std::string, std::string>>;
void write_report(const std::filesystem::path& path, const Report& report);
Report read_report(const std::filesystem::path& path);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace fracwell
