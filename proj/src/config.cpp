#include "fracwell/config.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <set>

#include "fracwell/errors.hpp"
#include "fracwell/io.hpp"
#include "fracwell/rng.hpp"

namespace fracwell {

double sobolev_critical_exponent(double q, double s) {
  return s * q < 1.0 ? q / (1.0 - s * q) : std::numeric_limits<double>::infinity();
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "domain.a", "domain.b", "domain.m", "domain.pad", "frac.s", "p", "magnetic.kind", "magnetic.c",
      "g.kind", "g.q", "g.q1", "g.q2", "g.table", "initial.kind", "initial.center", "initial.width",
      "initial.scale", "initial.phase", "initial.seed", "initial.path", "evolve.dt", "evolve.t_end",
      "evolve.scheme", "evolve.picard_tol", "evolve.picard_max_iters", "evolve.record_every",
      "evolve.snapshot_every", "evolve.max_halvings", "evolve.blowup_threshold", "wells.trials",
      "wells.climb_starts", "wells.climb_iters", "wells.delta_points", "groundstate.iters",
      "groundstate.tol", "output.dir", "seed", "deterministic"};
  return keys;
}

// Typed access with error collection.
class Reader {
 public:
  Reader(std::map<std::string, std::string> kv, std::vector<std::string>& errors)
      : kv_(std::move(kv)), errors_(errors) {}

  bool has(const std::string& key) const { return kv_.count(key) != 0; }

  double real(const std::string& key, double fallback) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    try {
      const double v = parse_double(it->second);
      if (!std::isfinite(v)) throw DomainError("non-finite");
      return v;
    } catch (const DomainError&) {
      errors_.push_back(key + ": expected a real number, got '" + it->second + "'");
      return fallback;
    }
  }

  long long integer(const std::string& key, long long fallback) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    long long v = 0;
    const auto& s = it->second;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
      errors_.push_back(key + ": expected an integer, got '" + s + "'");
      return fallback;
    }
    return v;
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    std::uint64_t v = 0;
    const auto& s = it->second;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
      errors_.push_back(key + ": expected a nonnegative integer, got '" + s + "'");
      return fallback;
    }
    return v;
  }

  bool boolean(const std::string& key, bool fallback) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    const auto& s = it->second;
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    errors_.push_back(key + ": expected true or false, got '" + s + "'");
    return fallback;
  }

  std::string text(const std::string& key, const std::string& fallback) {
    auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
  }

 private:
  std::map<std::string, std::string> kv_;
  std::vector<std::string>& errors_;
};

std::string fmt(double x) { return format_double(x); }

}  // namespace

RunConfig parse_config(std::string_view text) {
  std::vector<std::string> errors;
  std::map<std::string, std::string> kv;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(line_no) + ": expected key = value");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (!known_keys().count(key)) {
      errors.push_back("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
      continue;
    }
    if (kv.count(key)) {
      errors.push_back("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
      continue;
    }
    if (val.empty()) {
      errors.push_back("line " + std::to_string(line_no) + ": empty value for '" + key + "'");
      continue;
    }
    kv[key] = val;
  }

  Reader rd(kv, errors);
  RunConfig cfg;
  auto& pr = cfg.problem;
  pr.domain.a = rd.real("domain.a", -1.0);
  pr.domain.b = rd.real("domain.b", 1.0);
  pr.domain.m = static_cast<int>(rd.integer("domain.m", 64));
  pr.domain.pad = static_cast<int>(rd.integer("domain.pad", pr.domain.m));
  pr.s = rd.real("frac.s", 0.5);
  pr.p = rd.real("p", 3.0);
  if (!(pr.domain.a < pr.domain.b)) errors.push_back("domain: need domain.a < domain.b");
  if (pr.domain.m < 4) errors.push_back("domain.m must be at least 4");
  if (pr.domain.pad < pr.domain.m) errors.push_back("domain.pad must be at least domain.m");
  if (!(pr.s > 0.0 && pr.s < 1.0)) errors.push_back("frac.s must lie in (0,1)");
  if (!(pr.p > 1.0)) errors.push_back("p must exceed 1");

  const std::string mk = rd.text("magnetic.kind", "zero");
  pr.magnetic.c = rd.real("magnetic.c", 0.0);
  if (mk == "zero") pr.magnetic.kind = MagneticKind::Zero;
  else if (mk == "constant") pr.magnetic.kind = MagneticKind::Constant;
  else if (mk == "linear") pr.magnetic.kind = MagneticKind::Linear;
  else errors.push_back("magnetic.kind must be zero, constant or linear");

  const std::string gk = rd.text("g.kind", "power");
  bool g_ok = true;
  try {
    if (gk == "power") {
      pr.G = NFunction::power(rd.real("g.q", 2.0));
    } else if (gk == "power_sum") {
      if (!rd.has("g.q1") || !rd.has("g.q2")) errors.push_back("g.kind=power_sum needs g.q1 and g.q2");
      pr.G = NFunction::power_sum(rd.real("g.q1", 2.0), rd.real("g.q2", 4.0));
    } else if (gk == "power_log") {
      pr.G = NFunction::power_log(rd.real("g.q", 3.0));
    } else if (gk == "custom") {
      std::vector<double> ts, gs;
      const std::string table = rd.text("g.table", "");
      if (table.empty()) errors.push_back("g.kind=custom needs g.table = t:g, t:g, ...");
      std::size_t start = 0;
      while (start < table.size()) {
        std::size_t comma = table.find(',', start);
        if (comma == std::string::npos) comma = table.size();
        const std::string item = trim(std::string_view(table).substr(start, comma - start));
        start = comma + 1;
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
          errors.push_back("g.table: entries must look like t:g");
          g_ok = false;
          break;
        }
        ts.push_back(parse_double(item.substr(0, colon)));
        gs.push_back(parse_double(item.substr(colon + 1)));
      }
      if (g_ok && !ts.empty()) pr.G = NFunction::custom(ts, gs);
      else g_ok = false;
    } else {
      errors.push_back("g.kind must be power, power_sum, power_log or custom");
      g_ok = false;
    }
  } catch (const DomainError& e) {
    errors.push_back(std::string("g: ") + e.what());
    g_ok = false;
  }
  for (const char* k : {"g.q1", "g.q2"})
    if (rd.has(k) && gk != "power_sum") cfg.warnings.push_back(std::string(k) + " ignored for g.kind=" + gk);
  if (rd.has("g.table") && gk != "custom") cfg.warnings.push_back("g.table ignored for g.kind=" + gk);

  if (g_ok) {
    const NFunctionAudit au = audit(pr.G);
    for (const auto& e : au.errors) errors.push_back("g: " + e);
    for (const auto& w : au.warnings) cfg.warnings.push_back("g: " + w);
    const auto b = pr.G.bounds();
    // Structural hypothesis on (s, q-, q+, p).
    if (!(b.q_minus > 1.0)) errors.push_back("need q- > 1 (got " + fmt(b.q_minus) + ")");
    if (!(b.q_plus < pr.p + 1.0)) errors.push_back("need q+ < p+1 (q+ = " + fmt(b.q_plus) + ", p+1 = " + fmt(pr.p + 1.0) + ")");
    if (pr.s > 0.0 && pr.s < 1.0) {
      const double crit = sobolev_critical_exponent(b.q_minus, pr.s);
      if (!(pr.p + 1.0 < crit)) errors.push_back("need p+1 < N q-/(N - s q-) = " + fmt(crit));
      if (!(std::max(b.q_plus - 1.0, 1.0) < pr.p)) errors.push_back("need max(q+ - 1, 1) < p");
      if (2.0 * pr.s < 1.0 && pr.p > (1.0 + 2.0 * pr.s) / (1.0 - 2.0 * pr.s))
        cfg.warnings.push_back("p exceeds (N+2s)/(N-2s): outside the local existence range");
      if (!sobolev_integrable(pr.G, pr.s))
        cfg.warnings.push_back("G^{-1}(w)/w^{1+s} is not integrable at 0: Sobolev conjugate undefined");
      if (!sqrt_convexity_check(pr.G)) cfg.warnings.push_back("t -> G(sqrt t) is not convex");
    }
  }

  const std::string ik = rd.text("initial.kind", "gaussian");
  auto& in = cfg.initial;
  if (ik == "gaussian") in.kind = InitialKind::GaussianBump;
  else if (ik == "hat") in.kind = InitialKind::Hat;
  else if (ik == "random") in.kind = InitialKind::RandomSmooth;
  else if (ik == "file") in.kind = InitialKind::FromFile;
  else errors.push_back("initial.kind must be gaussian, hat, random or file");
  in.center = rd.real("initial.center", 0.5 * (pr.domain.a + pr.domain.b));
  in.width = rd.real("initial.width", 0.125 * (pr.domain.b - pr.domain.a));
  in.scale = rd.real("initial.scale", 1.0);
  in.phase = rd.real("initial.phase", 0.0);
  in.path = rd.text("initial.path", "");
  if (in.kind == InitialKind::FromFile && in.path.empty()) errors.push_back("initial.kind=file needs initial.path");
  if (!(in.width > 0.0)) errors.push_back("initial.width must be positive");

  auto& ev = cfg.evolve;
  ev.dt = rd.real("evolve.dt", 1e-3);
  ev.t_end = rd.real("evolve.t_end", 1.0);
  const std::string sc = rd.text("evolve.scheme", "explicit");
  if (sc == "explicit") ev.scheme = Scheme::Explicit;
  else if (sc == "picard") ev.scheme = Scheme::Picard;
  else errors.push_back("evolve.scheme must be explicit or picard");
  ev.picard_tol = rd.real("evolve.picard_tol", 1e-10);
  ev.picard_max_iters = static_cast<int>(rd.integer("evolve.picard_max_iters", 50));
  ev.record_every = static_cast<int>(rd.integer("evolve.record_every", 10));
  ev.snapshot_every = static_cast<int>(rd.integer("evolve.snapshot_every", 0));
  ev.max_halvings = static_cast<int>(rd.integer("evolve.max_halvings", 10));
  ev.blowup_threshold = rd.real("evolve.blowup_threshold", 1e6);
  if (!(ev.dt > 0.0)) errors.push_back("evolve.dt must be positive");
  if (!(ev.t_end > 0.0)) errors.push_back("evolve.t_end must be positive");
  if (!(ev.picard_tol > 0.0)) errors.push_back("evolve.picard_tol must be positive");
  if (ev.picard_max_iters < 1) errors.push_back("evolve.picard_max_iters must be at least 1");
  if (ev.record_every < 1) errors.push_back("evolve.record_every must be at least 1");
  if (ev.snapshot_every < 0) errors.push_back("evolve.snapshot_every must be nonnegative");
  if (ev.max_halvings < 0) errors.push_back("evolve.max_halvings must be nonnegative");
  if (ev.dt > pr.domain.h() && pr.domain.m >= 1) cfg.warnings.push_back("evolve.dt exceeds the grid spacing");

  cfg.seed = rd.unsigned_integer("seed", 1);
  in.seed = rd.unsigned_integer("initial.seed", cfg.seed);
  auto& wl = cfg.wells;
  wl.trials = static_cast<int>(rd.integer("wells.trials", 64));
  wl.climb_starts = static_cast<int>(rd.integer("wells.climb_starts", 4));
  wl.climb_iters = static_cast<int>(rd.integer("wells.climb_iters", 150));
  wl.delta_points = static_cast<int>(rd.integer("wells.delta_points", 64));
  wl.seed = cfg.seed;
  if (wl.trials < 1) errors.push_back("wells.trials must be at least 1");
  if (wl.climb_starts < 0 || wl.climb_iters < 0) errors.push_back("wells climbing settings must be nonnegative");
  if (wl.delta_points < 2) errors.push_back("wells.delta_points must be at least 2");
  cfg.ground_iters = static_cast<int>(rd.integer("groundstate.iters", 20000));
  cfg.ground_tol = rd.real("groundstate.tol", 1e-6);
  if (cfg.ground_iters < 1) errors.push_back("groundstate.iters must be at least 1");
  cfg.output_dir = rd.text("output.dir", "out");
  cfg.deterministic = rd.boolean("deterministic", false);

  if (!errors.empty()) throw ConfigError(std::move(errors));
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) { return parse_config(read_text(path)); }

std::vector<std::pair<std::string, std::string>> echo_config(const RunConfig& cfg) {
  const auto& pr = cfg.problem;
  std::vector<std::pair<std::string, std::string>> out;
  auto kind_of = [](MagneticKind k) {
    return k == MagneticKind::Zero ? "zero" : (k == MagneticKind::Constant ? "constant" : "linear");
  };
  out.emplace_back("domain.a", fmt(pr.domain.a));
  out.emplace_back("domain.b", fmt(pr.domain.b));
  out.emplace_back("domain.m", std::to_string(pr.domain.m));
  out.emplace_back("domain.pad", std::to_string(pr.domain.pad));
  out.emplace_back("frac.s", fmt(pr.s));
  out.emplace_back("p", fmt(pr.p));
  out.emplace_back("magnetic.kind", kind_of(pr.magnetic.kind));
  out.emplace_back("magnetic.c", fmt(pr.magnetic.c));
  out.emplace_back("g", pr.G.name());
  out.emplace_back("g.q_minus", fmt(pr.G.bounds().q_minus));
  out.emplace_back("g.q_plus", fmt(pr.G.bounds().q_plus));
  out.emplace_back("evolve.scheme", to_string(cfg.evolve.scheme));
  out.emplace_back("evolve.dt", fmt(cfg.evolve.dt));
  out.emplace_back("evolve.t_end", fmt(cfg.evolve.t_end));
  out.emplace_back("evolve.record_every", std::to_string(cfg.evolve.record_every));
  out.emplace_back("wells.trials", std::to_string(cfg.wells.trials));
  out.emplace_back("seed", std::to_string(cfg.seed));
  out.emplace_back("deterministic", cfg.deterministic ? "true" : "false");
  return out;
}

Field make_initial(const RunConfig& cfg, const std::filesystem::path& base) {
  const Domain1D& d = cfg.problem.domain;
  const auto& in = cfg.initial;
  Eigen::VectorXcd v(d.m);
  switch (in.kind) {
    case InitialKind::GaussianBump:
      for (int i = 0; i < d.m; ++i) {
        const double xi = (d.interior_node(i) - in.center) / in.width;
        v[i] = in.scale * std::exp(-xi * xi) * std::polar(1.0, in.phase);
      }
      return Field(d, v);
    case InitialKind::Hat: {
      const double mid = 0.5 * (d.a + d.b), half = 0.5 * (d.b - d.a);
      for (int i = 0; i < d.m; ++i) v[i] = in.scale * (1.0 - std::abs(d.interior_node(i) - mid) / half);
      return Field(d, v);
    }
    case InitialKind::RandomSmooth: {
      Rng rng(in.seed);
      return random_trial(d, rng, in.scale, in.scale);
    }
    case InitialKind::FromFile: {
      std::filesystem::path p = in.path;
      if (p.is_relative() && !base.empty()) p = base / p;
      Snapshot s = read_snapshot(p);
      if (!(s.u.domain == d)) throw ConfigError({"initial.path: snapshot grid does not match the configured domain"});
      return s.u;
    }
  }
  return Field::zeros(d);
}

}  // namespace fracwell
