#include "fracwell/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "fracwell/errors.hpp"

namespace fracwell {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw DomainError("not a number: '" + std::string(s) + "'");
  return v;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path.string());
  return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(line);
  }
  return out;
}

}  // namespace

std::string trace_csv(const Trace& trace) {
  std::string out = std::string(kTraceHeader) + "\n";
  for (const auto& r : trace) {
    const double v[] = {r.t, r.J, r.I, r.l2h, r.lp1, r.ut_l2h, r.diss, r.F, r.drift};
    for (std::size_t k = 0; k < 9; ++k) {
      if (k) out += ',';
      out += format_double(v[k]);
    }
    out += '\n';
  }
  return out;
}

Trace parse_trace_csv(const std::string& text) {
  const auto lines = lines_of(text);
  if (lines.empty() || lines.front() != kTraceHeader) throw IoError("trace CSV: unexpected header");
  Trace out;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    if (lines[k].empty()) continue;
    const auto f = split(lines[k], ',');
    if (f.size() != 9) throw IoError("trace CSV: expected 9 fields on line " + std::to_string(k + 1));
    TraceRecord r;
    try {
      r.t = parse_double(f[0]);
      r.J = parse_double(f[1]);
      r.I = parse_double(f[2]);
      r.l2h = parse_double(f[3]);
      r.lp1 = parse_double(f[4]);
      r.ut_l2h = parse_double(f[5]);
      r.diss = parse_double(f[6]);
      r.F = parse_double(f[7]);
      r.drift = parse_double(f[8]);
    } catch (const DomainError& e) {
      throw IoError("trace CSV line " + std::to_string(k + 1) + ": " + e.what());
    }
    out.push_back(r);
  }
  return out;
}

void write_trace_csv(const std::filesystem::path& path, const Trace& trace) { write_text(path, trace_csv(trace)); }

Trace read_trace_csv(const std::filesystem::path& path) { return parse_trace_csv(read_text(path)); }

void write_d_curve_csv(const std::filesystem::path& path, const std::vector<DeltaPoint>& curve) {
  std::string out = std::string(kDeltaHeader) + "\n";
  for (const auto& d : curve) out += format_double(d.delta) + "," + format_double(d.d) + "\n";
  write_text(path, out);
}

std::vector<DeltaPoint> read_d_curve_csv(const std::filesystem::path& path) {
  const auto lines = lines_of(read_text(path));
  if (lines.empty() || lines.front() != kDeltaHeader) throw IoError("d curve CSV: unexpected header");
  std::vector<DeltaPoint> out;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    if (lines[k].empty()) continue;
    const auto f = split(lines[k], ',');
    if (f.size() != 2) throw IoError("d curve CSV: expected 2 fields");
    try {
      out.push_back({parse_double(f[0]), parse_double(f[1])});
    } catch (const DomainError& e) {
      throw IoError(std::string("d curve CSV: ") + e.what());
    }
  }
  return out;
}

void write_snapshot(const std::filesystem::path& path, const Snapshot& snap) {
  const Domain1D& d = snap.u.domain;
  std::string out = "# fracwell snapshot\n";
  out += "# a=" + format_double(d.a) + " b=" + format_double(d.b) + " m=" + std::to_string(d.m) +
         " pad=" + std::to_string(d.pad) + " t=" + format_double(snap.t) + "\n";
  for (int i = 0; i < d.m; ++i) {
    out += format_double(d.interior_node(i)) + " " + format_double(snap.u.values[i].real()) + " " +
           format_double(snap.u.values[i].imag()) + "\n";
  }
  write_text(path, out);
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  const auto lines = lines_of(read_text(path));
  Domain1D d;
  double t = 0.0;
  bool have_meta = false;
  std::vector<Complex> vals;
  try {
    for (const auto& line : lines) {
      if (line.empty()) continue;
      if (line.front() == '#') {
        if (line.find("a=") == std::string::npos) continue;
        for (const auto& tok : split(line.substr(1), ' ')) {
          const auto eq = tok.find('=');
          if (eq == std::string::npos) continue;
          const std::string key = tok.substr(0, eq);
          const std::string val = tok.substr(eq + 1);
          if (key == "a") d.a = parse_double(val);
          else if (key == "b") d.b = parse_double(val);
          else if (key == "m") d.m = static_cast<int>(parse_double(val));
          else if (key == "pad") d.pad = static_cast<int>(parse_double(val));
          else if (key == "t") t = parse_double(val);
        }
        have_meta = true;
        continue;
      }
      std::vector<std::string> f;
      for (auto& tok : split(line, ' '))
        if (!tok.empty()) f.push_back(tok);
      if (f.size() != 3) throw IoError("snapshot: expected `x re im` on every data line");
      vals.emplace_back(parse_double(f[1]), parse_double(f[2]));
    }
  } catch (const DomainError& e) {
    throw IoError(std::string("snapshot: ") + e.what());
  }
  if (!have_meta) throw IoError("snapshot: missing grid header");
  if (static_cast<int>(vals.size()) != d.m) throw IoError("snapshot: node count does not match header");
  Eigen::VectorXcd v(d.m);
  for (int i = 0; i < d.m; ++i) v[i] = vals[static_cast<std::size_t>(i)];
  return {t, Field(d, v)};
}

void write_report(const std::filesystem::path& path, const Report& report) {
  std::string out;
  for (const auto& [k, v] : report) out += k + "=" + v + "\n";
  write_text(path, out);
}

Report read_report(const std::filesystem::path& path) {
  Report out;
  for (const auto& line : lines_of(read_text(path))) {
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw IoError("report: line without '='");
    out.emplace_back(line.substr(0, eq), line.substr(eq + 1));
  }
  return out;
}

}  // namespace fracwell
