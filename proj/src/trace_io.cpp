#include "sphereclamp/trace_io.hpp"

#include <array>
#include <charconv>
#include <iomanip>

namespace sphereclamp::io {

std::string format_real(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

namespace {

void put_pose(std::ostream& out, const Pose& p) {
  out << format_real(p.v.x()) << ',' << format_real(p.v.y()) << ',' << format_real(p.v.z()) << ','
      << format_real(p.rotation.w()) << ',' << format_real(p.rotation.x()) << ','
      << format_real(p.rotation.y()) << ',' << format_real(p.rotation.z());
}

void put_json_pose(std::ostream& out, char prefix, const Pose& p) {
  out << '"' << prefix << "x\":" << format_real(p.v.x()) << ",\"" << prefix
      << "y\":" << format_real(p.v.y()) << ",\"" << prefix << "z\":" << format_real(p.v.z())
      << ",\"" << prefix << "qw\":" << format_real(p.rotation.w()) << ",\"" << prefix
      << "qx\":" << format_real(p.rotation.x()) << ",\"" << prefix
      << "qy\":" << format_real(p.rotation.y()) << ",\"" << prefix
      << "qz\":" << format_real(p.rotation.z());
}

}  // namespace

void write_trace_csv(const sim::Trace& trace, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : trace.records) {
    for (std::size_t i = 0; i < trace.limb_names.size(); ++i) {
      out << format_real(r.time) << ',' << trace.limb_names[i] << ',';
      put_pose(out, r.sensed[i]);
      out << ',';
      put_pose(out, r.command[i]);
      out << ',' << format_real(r.dist[i]) << ',' << format_real(r.t) << ',' << r.segment << ','
          << to_string(r.mode) << '\n';
    }
  }
}

void write_trace_jsonl(const sim::Trace& trace, std::ostream& out) {
  for (const auto& r : trace.records) {
    for (std::size_t i = 0; i < trace.limb_names.size(); ++i) {
      // Limb names are validated identifiers; no escaping needed beyond quotes.
      out << "{\"time\":" << format_real(r.time) << ",\"limb\":\"" << trace.limb_names[i] << "\",";
      put_json_pose(out, 's', r.sensed[i]);
      out << ',';
      put_json_pose(out, 'c', r.command[i]);
      out << ",\"dist\":" << format_real(r.dist[i]) << ",\"t\":" << format_real(r.t)
          << ",\"segment\":" << r.segment << ",\"mode\":\"" << to_string(r.mode) << "\"}\n";
    }
  }
}

void write_trace(const sim::Trace& trace, TraceFormat format, std::ostream& out) {
  if (format == TraceFormat::kCsv) {
    write_trace_csv(trace, out);
  } else {
    write_trace_jsonl(trace, out);
  }
}

TraceSummary summarize(const sim::Trace& trace) {
  TraceSummary s;
  for (const auto& name : trace.limb_names) s.limbs.push_back({name, 0.0, 0.0});
  for (const auto& r : trace.records) {
    for (std::size_t i = 0; i < s.limbs.size(); ++i) {
      s.limbs[i].max_dist = std::max(s.limbs[i].max_dist, r.dist[i]);
      s.limbs[i].max_deviation_mm =
          std::max(s.limbs[i].max_deviation_mm, (r.command[i].v - r.sensed[i].v).norm());
    }
  }
  s.steps = trace.records.size();
  s.no_solution_events = trace.no_solution_events;
  s.recovery_count = trace.recovery_count;
  s.safety_violations = trace.safety_violations;
  s.laps = trace.laps;
  return s;
}

void print_summary(const TraceSummary& s, double wall_seconds, std::ostream& out) {
  out << "steps: " << s.steps << "\n";
  out << "limb                 max_dist   max_dev_mm\n";
  for (const auto& l : s.limbs) {
    out << std::left << std::setw(20) << l.name << std::right << std::fixed
        << std::setprecision(4) << std::setw(9) << l.max_dist << std::setw(13)
        << l.max_deviation_mm << "\n";
  }
  out.unsetf(std::ios::floatfield);
  out << "no_solution_events: " << s.no_solution_events << "\n";
  out << "recoveries: " << s.recovery_count << "\n";
  out << "laps: " << s.laps << "\n";
  out << "safety_violations: " << s.safety_violations << "\n";
  out << "wall_time_s: " << std::setprecision(3) << wall_seconds << "\n";
}

}  // namespace sphereclamp::io
