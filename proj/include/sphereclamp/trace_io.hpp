#ifndef SPHERECLAMP_TRACE_IO_HPP
#define SPHERECLAMP_TRACE_IO_HPP

#include <ostream>
#include <string>
#include <vector>

#include "sphereclamp/sim.hpp"

namespace sphereclamp::io {

enum class TraceFormat { kCsv, kJsonLines };

/// CSV column order, one row per (step, limb).
inline constexpr const char* kCsvHeader =
    "time,limb,sx,sy,sz,sqw,sqx,sqy,sqz,cx,cy,cz,cqw,cqx,cqy,cqz,dist,t,segment,mode";

/// Shortest round-trip decimal form of a double.
std::string format_real(double v);

void write_trace_csv(const sim::Trace& trace, std::ostream& out);
/// One JSON object per (step, limb) with the CSV column names as keys.
void write_trace_jsonl(const sim::Trace& trace, std::ostream& out);
void write_trace(const sim::Trace& trace, TraceFormat format, std::ostream& out);

struct LimbSummary {
  std::string name;
  double max_dist = 0.0;          ///< normalized command-state distance
  double max_deviation_mm = 0.0;  ///< translational command-state distance
};

struct TraceSummary {
  std::vector<LimbSummary> limbs;
  std::uint64_t steps = 0;
  std::uint64_t no_solution_events = 0;
  std::uint64_t recovery_count = 0;
  std::uint64_t safety_violations = 0;
  int laps = 0;
};

TraceSummary summarize(const sim::Trace& trace);
void print_summary(const TraceSummary& summary, double wall_seconds, std::ostream& out);

}  // namespace sphereclamp::io

#endif
