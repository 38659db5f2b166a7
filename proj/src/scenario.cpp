#include "scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace triline {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Entry {
  std::string section;
  std::string key;
  std::string value;
  int line;
};

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> tokens(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

std::vector<Entry> parse_entries(const std::string& text, const std::string& origin) {
  std::vector<Entry> out;
  std::istringstream is(text);
  std::string line, section;
  int n = 0;
  while (std::getline(is, line)) {
    ++n;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        fail(Err::ParseError, origin + ":" + std::to_string(n) + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        fail(Err::ParseError, origin + ":" + std::to_string(n) + ": empty section name");
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      fail(Err::ParseError, origin + ":" + std::to_string(n) + ": expected key = value");
    if (section.empty())
      fail(Err::ParseError, origin + ":" + std::to_string(n) + ": key outside any section");
    Entry e;
    e.section = section;
    e.key = trim(line.substr(0, eq));
    e.value = trim(line.substr(eq + 1));
    e.line = n;
    if (e.key.empty())
      fail(Err::ParseError, origin + ":" + std::to_string(n) + ": empty key");
    out.push_back(std::move(e));
  }
  return out;
}

class Builder {
public:
  explicit Builder(const std::string& origin) : origin_(origin) {}

  ScenarioConfig build(const std::vector<Entry>& entries) {
    for (const Entry& e : entries) dispatch(e);
    validate();
    if (!errors_.empty()) {
      std::ostringstream os;
      os << origin_ << ": " << errors_.size() << " validation error(s):";
      for (const std::string& s : errors_) os << "\n  - " << s;
      fail(Err::ValidationError, os.str());
    }
    return cfg_;
  }

private:
  void error(const std::string& field, const std::string& why) {
    errors_.push_back(field + ": " + why);
  }

  double num(const Entry& e) {
    try {
      size_t pos = 0;
      double v = std::stod(e.value, &pos);
      if (trim(e.value.substr(pos)).empty()) return v;
    } catch (...) {
    }
    error(e.section + "." + e.key, "expected a number, got '" + e.value + "'");
    return 0.0;
  }

  int integer(const Entry& e) {
    try {
      size_t pos = 0;
      long v = std::stol(e.value, &pos);
      if (trim(e.value.substr(pos)).empty()) return static_cast<int>(v);
    } catch (...) {
    }
    error(e.section + "." + e.key, "expected an integer, got '" + e.value + "'");
    return 0;
  }

  bool boolean(const Entry& e) {
    if (e.value == "true" || e.value == "on" || e.value == "1") return true;
    if (e.value == "false" || e.value == "off" || e.value == "0") return false;
    error(e.section + "." + e.key, "expected a boolean, got '" + e.value + "'");
    return false;
  }

  PhaseSpec& phase(const std::string& label) {
    for (PhaseSpec& p : cfg_.phases)
      if (p.label == label) return p;
    cfg_.phases.push_back(PhaseSpec{label, 0.0, BulkEos{}});
    return cfg_.phases.back();
  }

  CurveSpec& curve(const std::string& id) {
    for (CurveSpec& c : cfg_.curves)
      if (c.id == id) return c;
    cfg_.curves.push_back(CurveSpec{});
    cfg_.curves.back().id = id;
    return cfg_.curves.back();
  }

  JunctionSpec& junction(const std::string& id) {
    for (JunctionSpec& j : cfg_.junctions)
      if (j.id == id) return j;
    cfg_.junctions.push_back(JunctionSpec{});
    cfg_.junctions.back().id = id;
    return cfg_.junctions.back();
  }

  void dispatch(const Entry& e) {
    const std::string& s = e.section;
    if (s == "general") return general(e);
    if (s == "domain") return domain(e);
    if (s.rfind("phase.", 0) == 0) return phase_entry(s.substr(6), e);
    if (s.rfind("eos.bulk.", 0) == 0) return bulk_eos_entry(s.substr(9), e);
    if (s.rfind("eos.surface.", 0) == 0) return surface_eos_entry(s.substr(12), e);
    if (s.rfind("curve.", 0) == 0) return curve_entry(s.substr(6), e);
    if (s.rfind("sorption.", 0) == 0) return sorption_entry(s.substr(9), e);
    if (s.rfind("slip.", 0) == 0) return slip_entry(s.substr(5), e);
    if (s.rfind("junction.", 0) == 0) return junction_entry(s.substr(9), e);
    if (s == "topology") return topology_entry(e);
    error(s, "unknown section");
  }

  void general(const Entry& e) {
    if (e.key == "mode") cfg_.mode = e.value;
    else if (e.key == "t_end") cfg_.t_end = num(e);
    else if (e.key == "dt") cfg_.dt = num(e);
    else if (e.key == "cfl_safety") cfg_.cfl_safety = num(e);
    else if (e.key == "m_n") cfg_.m_n = num(e);
    else if (e.key == "m_c") cfg_.m_c = num(e);
    else if (e.key == "convergence_vmax") cfg_.convergence_vmax = num(e);
    else if (e.key == "integrator") cfg_.integrator = e.value;
    else if (e.key == "output_every") cfg_.output_every = integer(e);
    else if (e.key == "snapshot_every") cfg_.snapshot_every = integer(e);
    else if (e.key == "remesh_every") cfg_.remesh_every = integer(e);
    else if (e.key == "remesh_h") cfg_.remesh_h = num(e);
    else error("general." + e.key, "unknown key");
  }

  void domain(const Entry& e) {
    if (e.key != "box") {
      error("domain." + e.key, "unknown key");
      return;
    }
    const auto t = tokens(e.value);
    if (t.size() != 4) {
      error("domain.box", "expected 4 numbers (x0 y0 x1 y1)");
      return;
    }
    try {
      cfg_.box = DomainBox{std::stod(t[0]), std::stod(t[1]), std::stod(t[2]), std::stod(t[3])};
    } catch (...) {
      error("domain.box", "bad number");
    }
  }

  void phase_entry(const std::string& label, const Entry& e) {
    PhaseSpec& p = phase(label);
    if (e.key == "mass") p.mass = num(e);
    else error("phase." + label + "." + e.key, "unknown key");
  }

  void bulk_eos_entry(const std::string& label, const Entry& e) {
    PhaseSpec& p = phase(label);
    if (e.key == "rho_ref") p.eos.rho_ref = num(e);
    else if (e.key == "p_ref") p.eos.p_ref = num(e);
    else if (e.key == "c2") p.eos.c2 = num(e);
    else error("eos.bulk." + label + "." + e.key, "unknown key");
  }

  void surface_eos_entry(const std::string& id, const Entry& e) {
    SurfaceEos& s = cfg_.surface_eos[id];
    if (e.key == "gamma0") s.gamma0 = num(e);
    else if (e.key == "rho_star") s.rho_star = num(e);
    else if (e.key == "psi_offset") s.psi_offset = num(e);
    else error("eos.surface." + id + "." + e.key, "unknown key");
  }

  void curve_entry(const std::string& id, const Entry& e) {
    CurveSpec& c = curve(id);
    if (e.key == "kind") c.kind = e.value;
    else if (e.key == "center") {
      const auto t = tokens(e.value);
      if (t.size() != 2) error("curve." + id + ".center", "expected 2 numbers");
      else
        try {
          c.center = {std::stod(t[0]), std::stod(t[1])};
        } catch (...) {
          error("curve." + id + ".center", "bad number");
        }
    } else if (e.key == "radius") c.radius = num(e);
    else if (e.key == "angles") {
      const auto t = tokens(e.value);
      if (t.size() != 2) error("curve." + id + ".angles", "expected 2 numbers (degrees)");
      else
        try {
          c.angle_start_deg = std::stod(t[0]);
          c.angle_end_deg = std::stod(t[1]);
        } catch (...) {
          error("curve." + id + ".angles", "bad number");
        }
    } else if (e.key == "points") {
      const auto t = tokens(e.value);
      if (t.size() < 4 || t.size() % 2 != 0) {
        error("curve." + id + ".points", "expected an even list of at least 4 numbers");
        return;
      }
      c.points.clear();
      try {
        for (size_t i = 0; i < t.size(); i += 2)
          c.points.push_back({std::stod(t[i]), std::stod(t[i + 1])});
      } catch (...) {
        error("curve." + id + ".points", "bad number");
      }
    } else if (e.key == "markers") c.markers = integer(e);
    else if (e.key == "rho_s") c.rho_s = num(e);
    else if (e.key == "side_minus") c.side_minus = e.value;
    else if (e.key == "side_plus") c.side_plus = e.value;
    else if (e.key == "constraint") c.constraint = e.value;
    else error("curve." + id + "." + e.key, "unknown key");
  }

  void sorption_entry(const std::string& rest, const Entry& e) {
    const size_t dotpos = rest.rfind('.');
    if (dotpos == std::string::npos) {
      error("sorption." + rest, "section must be sorption.<curve>.<plus|minus>");
      return;
    }
    const std::string cid = rest.substr(0, dotpos);
    const std::string side = rest.substr(dotpos + 1);
    SorptionSpec* spec = nullptr;
    for (SorptionSpec& s : cfg_.sorption)
      if (s.curve == cid && s.side == side) spec = &s;
    if (!spec) {
      cfg_.sorption.push_back(SorptionSpec{cid, side, SorptionParams{}});
      spec = &cfg_.sorption.back();
    }
    if (e.key == "a_sigma") spec->params.a_sigma = num(e);
    else if (e.key == "k_de") spec->params.k_de = num(e);
    else if (e.key == "include_kinetic") spec->params.include_kinetic = boolean(e);
    else error("sorption." + rest + "." + e.key, "unknown key");
  }

  void slip_entry(const std::string& cid, const Entry& e) {
    SlipSpec* spec = nullptr;
    for (SlipSpec& s : cfg_.slip)
      if (s.curve == cid) spec = &s;
    if (!spec) {
      cfg_.slip.push_back(SlipSpec{cid, SlipParams{}});
      spec = &cfg_.slip.back();
    }
    if (e.key == "beta_plus") spec->params.beta_plus = num(e);
    else if (e.key == "beta_minus") spec->params.beta_minus = num(e);
    else error("slip." + cid + "." + e.key, "unknown key");
  }

  void junction_entry(const std::string& id, const Entry& e) {
    JunctionSpec& j = junction(id);
    if (e.key == "curves") {
      const auto t = tokens(e.value);
      if (t.size() != 3) {
        error("junction." + id + ".curves", "expected three curve:end entries");
        return;
      }
      for (int k = 0; k < 3; ++k) {
        const size_t colon = t[k].find(':');
        if (colon == std::string::npos) {
          error("junction." + id + ".curves", "entry '" + t[k] + "' must be curve:start|end");
          return;
        }
        j.ends[k] = {t[k].substr(0, colon), t[k].substr(colon + 1)};
        if (j.ends[k].second != "start" && j.ends[k].second != "end")
          error("junction." + id + ".curves", "end must be 'start' or 'end'");
      }
    } else if (e.key == "line_tension") j.line_tension = num(e);
    else if (e.key == "mobility") j.mobility = num(e);
    else if (e.key == "transfer") j.transfer = e.value;
    else if (e.key == "L") j.transfer_coefficient = num(e);
    else if (e.key == "pinned_horizontal") j.pinned_horizontal = boolean(e);
    else error("junction." + id + "." + e.key, "unknown key");
  }

  void topology_entry(const Entry& e) {
    if (e.key.rfind("region.", 0) != 0) {
      error("topology." + e.key, "unknown key (expected region.<phase>)");
      return;
    }
    RegionSpec r;
    r.phase = e.key.substr(7);
    for (const std::string& t : tokens(e.value)) {
      if (t == "box") {
        r.include_box = true;
        continue;
      }
      const size_t colon = t.find(':');
      const std::string cid = colon == std::string::npos ? t : t.substr(0, colon);
      const std::string dir = colon == std::string::npos ? "fwd" : t.substr(colon + 1);
      if (dir != "fwd" && dir != "rev") {
        error("topology.region." + r.phase, "direction must be fwd or rev in '" + t + "'");
        continue;
      }
      r.items.emplace_back(cid, dir == "rev");
    }
    cfg_.regions.push_back(std::move(r));
  }

  void validate() {
    if (cfg_.mode != "planar" && cfg_.mode != "axisymmetric")
      error("general.mode", "must be planar or axisymmetric");
    if (!(cfg_.box.x1 > cfg_.box.x0) || !(cfg_.box.y1 > cfg_.box.y0))
      error("domain.box", "box must have positive extent");
    if (cfg_.mode == "axisymmetric" && cfg_.box.x0 < 0.0)
      error("domain.box", "axisymmetric domain needs r >= 0");
    if (!(cfg_.dt > 0.0)) error("general.dt", "must be positive");
    if (!(cfg_.cfl_safety > 0.0) || cfg_.cfl_safety > 1.0)
      error("general.cfl_safety", "must lie in (0, 1]");
    if (!(cfg_.m_n > 0.0)) error("general.m_n", "must be positive");
    if (cfg_.m_c < 0.0) error("general.m_c", "must be nonnegative");
    if (cfg_.integrator != "euler" && cfg_.integrator != "rk2")
      error("general.integrator", "must be euler or rk2");
    if (cfg_.remesh_every > 0 && !(cfg_.remesh_h > 0.0))
      error("general.remesh_h", "must be positive when remeshing is on");

    if (cfg_.phases.empty()) error("phase", "at least one phase required");
    for (const PhaseSpec& p : cfg_.phases) {
      if (!(p.mass > 0.0)) error("phase." + p.label + ".mass", "must be positive");
      if (!(p.eos.c2 > 0.0)) error("eos.bulk." + p.label + ".c2", "must be positive");
    }

    auto has_phase = [&](const std::string& l) {
      return std::any_of(cfg_.phases.begin(), cfg_.phases.end(),
                         [&](const PhaseSpec& p) { return p.label == l; });
    };
    auto curve_ptr = [&](const std::string& id) -> const CurveSpec* {
      for (const CurveSpec& c : cfg_.curves)
        if (c.id == id) return &c;
      return nullptr;
    };

    if (cfg_.curves.empty()) error("curve", "at least one curve required");
    for (const CurveSpec& c : cfg_.curves) {
      const std::string tag = "curve." + c.id;
      if (c.kind != "arc" && c.kind != "chain") error(tag + ".kind", "must be arc or chain");
      if (c.kind == "arc") {
        if (!(c.radius > 0.0)) error(tag + ".radius", "must be positive");
        if (c.angle_start_deg == c.angle_end_deg) error(tag + ".angles", "zero sweep");
      }
      if (c.kind == "chain" && c.points.size() < 2)
        error(tag + ".points", "need at least two points");
      if (c.markers < 3) error(tag + ".markers", "need at least 3 markers");
      if (!has_phase(c.side_minus)) error(tag + ".side_minus", "unknown phase '" + c.side_minus + "'");
      if (!has_phase(c.side_plus)) error(tag + ".side_plus", "unknown phase '" + c.side_plus + "'");
      if (c.constraint != "free" && c.constraint != "horizontal" && c.constraint != "fixed")
        error(tag + ".constraint", "must be free, horizontal or fixed");
      const auto it = cfg_.surface_eos.find(c.id);
      if (it == cfg_.surface_eos.end()) {
        error("eos.surface." + c.id, "missing surface EOS section");
      } else {
        if (!(it->second.gamma0 > 0.0)) error("eos.surface." + c.id + ".gamma0", "must be positive");
        if (!(it->second.rho_star > 0.0))
          error("eos.surface." + c.id + ".rho_star", "must be positive");
        if (c.rho_s < 0.0 || c.rho_s >= surface_rho_max(it->second))
          error(tag + ".rho_s", "outside the admissible range of the surface EOS");
      }
    }
    for (size_t i = 0; i < cfg_.curves.size(); ++i)
      for (size_t k = i + 1; k < cfg_.curves.size(); ++k)
        if (cfg_.curves[i].id == cfg_.curves[k].id)
          error("curve." + cfg_.curves[i].id, "duplicate id");

    for (const auto& [id, eos] : cfg_.surface_eos)
      if (!curve_ptr(id)) error("eos.surface." + id, "no such curve");
    for (const SorptionSpec& s : cfg_.sorption) {
      const std::string tag = "sorption." + s.curve + "." + s.side;
      if (!curve_ptr(s.curve)) error(tag, "no such curve");
      if (s.side != "plus" && s.side != "minus") error(tag, "side must be plus or minus");
      if (!(s.params.a_sigma > 0.0)) error(tag + ".a_sigma", "must be positive");
      if (!(s.params.k_de > 0.0)) error(tag + ".k_de", "must be positive");
    }
    for (const SlipSpec& s : cfg_.slip) {
      if (!curve_ptr(s.curve)) error("slip." + s.curve, "no such curve");
      if (s.params.beta_plus < 0.0 || s.params.beta_minus < 0.0)
        error("slip." + s.curve, "negative slip coefficient");
      if (!(s.params.beta_sum() > 0.0))
        error("slip." + s.curve,
              "beta_plus + beta_minus = 0 with tangential motion enabled");
    }

    for (const JunctionSpec& j : cfg_.junctions) {
      const std::string tag = "junction." + j.id;
      for (const auto& [cid, end] : j.ends) {
        if (cid.empty()) {
          error(tag + ".curves", "three curve:end entries required");
          break;
        }
        if (!curve_ptr(cid)) error(tag + ".curves", "no such curve '" + cid + "'");
      }
      if (j.mobility < 0.0) error(tag + ".mobility", "must be nonnegative");
      if (j.transfer != "off" && j.transfer != "linear" && j.transfer != "ideal")
        error(tag + ".transfer", "must be off, linear or ideal");
      if (j.transfer == "linear" && !(j.transfer_coefficient > 0.0))
        error(tag + ".L", "linear transfer requires L > 0");
      if (j.transfer != "off") {
        for (const auto& [cid, end] : j.ends) {
          const CurveSpec* c = curve_ptr(cid);
          if (c && !(c->rho_s > 0.0))
            error(tag, "transfer closure requires initial surface mass on curve " + cid);
        }
      }
    }

    if (cfg_.regions.size() != cfg_.phases.size())
      error("topology", "exactly one region per phase required");
    for (const RegionSpec& r : cfg_.regions) {
      if (!has_phase(r.phase)) error("topology.region." + r.phase, "unknown phase");
      for (const auto& [cid, rev] : r.items)
        if (!curve_ptr(cid)) error("topology.region." + r.phase, "no such curve '" + cid + "'");
    }
    for (const PhaseSpec& p : cfg_.phases) {
      const bool found = std::any_of(cfg_.regions.begin(), cfg_.regions.end(),
                                     [&](const RegionSpec& r) { return r.phase == p.label; });
      if (!found) error("topology.region." + p.label, "missing region for phase");
    }

    // side-label consistency: forward traversal has side_plus on the left
    for (const RegionSpec& r : cfg_.regions)
      for (const auto& [cid, rev] : r.items) {
        const CurveSpec* c = curve_ptr(cid);
        if (!c) continue;
        const std::string expect = rev ? c->side_minus : c->side_plus;
        if (expect != r.phase)
          error("topology.region." + r.phase,
                "curve " + cid + (rev ? " (rev)" : " (fwd)") + " bounds phase " + expect +
                    " on that side, not " + r.phase);
      }
  }

  std::string origin_;
  ScenarioConfig cfg_;
  std::vector<std::string> errors_;
};

std::vector<Vec2> arc_markers(const CurveSpec& c, bool closed) {
  std::vector<Vec2> pts;
  const double a0 = c.angle_start_deg * kPi / 180.0;
  const double a1 = c.angle_end_deg * kPi / 180.0;
  const int n = c.markers;
  const int denom = closed ? n : n - 1;
  for (int i = 0; i < n; ++i) {
    const double th = a0 + (a1 - a0) * static_cast<double>(i) / denom;
    pts.push_back(c.center + c.radius * Vec2{std::cos(th), std::sin(th)});
  }
  return pts;
}

std::vector<Vec2> chain_markers(const CurveSpec& c) {
  // resample the vertex polyline to c.markers points by arclength
  const auto& p = c.points;
  std::vector<double> cum(p.size(), 0.0);
  for (size_t i = 1; i < p.size(); ++i) cum[i] = cum[i - 1] + norm(p[i] - p[i - 1]);
  const double total = cum.back();
  if (!(total > 0.0)) fail(Err::ValidationError, "curve " + c.id + ": zero-length chain");
  std::vector<Vec2> pts;
  for (int i = 0; i < c.markers; ++i) {
    const double s = total * static_cast<double>(i) / (c.markers - 1);
    size_t k = 0;
    while (k + 1 < p.size() - 1 && cum[k + 1] < s) ++k;
    const double f = (s - cum[k]) / (cum[k + 1] - cum[k]);
    pts.push_back(p[k] + f * (p[k + 1] - p[k]));
  }
  pts.front() = p.front();
  pts.back() = p.back();
  return pts;
}

}  // namespace

Scenario load_scenario_text(const std::string& text, const std::string& origin) {
  Builder b(origin);
  Scenario s;
  s.config = b.build(parse_entries(text, origin));
  s.canonical_text = serialize_scenario(s.config);
  // geometry-level validation happens on construction
  build_state(s.config);
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(Err::IoError, "cannot open scenario file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return load_scenario_text(ss.str(), path);
}

std::string serialize_scenario(const ScenarioConfig& c) {
  std::ostringstream os;
  os << "# triline scenario\n";
  os << "[general]\n";
  os << "mode = " << c.mode << "\n";
  os << "t_end = " << fmt(c.t_end) << "\n";
  os << "dt = " << fmt(c.dt) << "\n";
  os << "cfl_safety = " << fmt(c.cfl_safety) << "\n";
  os << "m_n = " << fmt(c.m_n) << "\n";
  os << "m_c = " << fmt(c.m_c) << "\n";
  os << "convergence_vmax = " << fmt(c.convergence_vmax) << "\n";
  os << "integrator = " << c.integrator << "\n";
  os << "output_every = " << c.output_every << "\n";
  os << "snapshot_every = " << c.snapshot_every << "\n";
  os << "remesh_every = " << c.remesh_every << "\n";
  os << "remesh_h = " << fmt(c.remesh_h) << "\n";
  os << "\n[domain]\n";
  os << "box = " << fmt(c.box.x0) << ' ' << fmt(c.box.y0) << ' ' << fmt(c.box.x1) << ' '
     << fmt(c.box.y1) << "\n";
  for (const PhaseSpec& p : c.phases) {
    os << "\n[phase." << p.label << "]\n";
    os << "mass = " << fmt(p.mass) << "\n";
    os << "\n[eos.bulk." << p.label << "]\n";
    os << "rho_ref = " << fmt(p.eos.rho_ref) << "\n";
    os << "p_ref = " << fmt(p.eos.p_ref) << "\n";
    os << "c2 = " << fmt(p.eos.c2) << "\n";
  }
  for (const CurveSpec& cv : c.curves) {
    os << "\n[curve." << cv.id << "]\n";
    os << "kind = " << cv.kind << "\n";
    if (cv.kind == "arc") {
      os << "center = " << fmt(cv.center.x) << ' ' << fmt(cv.center.y) << "\n";
      os << "radius = " << fmt(cv.radius) << "\n";
      os << "angles = " << fmt(cv.angle_start_deg) << ' ' << fmt(cv.angle_end_deg) << "\n";
    } else {
      os << "points =";
      for (const Vec2& p : cv.points) os << ' ' << fmt(p.x) << ' ' << fmt(p.y);
      os << "\n";
    }
    os << "markers = " << cv.markers << "\n";
    os << "rho_s = " << fmt(cv.rho_s) << "\n";
    os << "side_minus = " << cv.side_minus << "\n";
    os << "side_plus = " << cv.side_plus << "\n";
    os << "constraint = " << cv.constraint << "\n";
    const auto it = c.surface_eos.find(cv.id);
    if (it != c.surface_eos.end()) {
      os << "\n[eos.surface." << cv.id << "]\n";
      os << "gamma0 = " << fmt(it->second.gamma0) << "\n";
      os << "rho_star = " << fmt(it->second.rho_star) << "\n";
      os << "psi_offset = " << fmt(it->second.psi_offset) << "\n";
    }
  }
  for (const SlipSpec& s : c.slip) {
    os << "\n[slip." << s.curve << "]\n";
    os << "beta_plus = " << fmt(s.params.beta_plus) << "\n";
    os << "beta_minus = " << fmt(s.params.beta_minus) << "\n";
  }
  for (const SorptionSpec& s : c.sorption) {
    os << "\n[sorption." << s.curve << "." << s.side << "]\n";
    os << "a_sigma = " << fmt(s.params.a_sigma) << "\n";
    os << "k_de = " << fmt(s.params.k_de) << "\n";
    os << "include_kinetic = " << (s.params.include_kinetic ? "true" : "false") << "\n";
  }
  for (const JunctionSpec& j : c.junctions) {
    os << "\n[junction." << j.id << "]\n";
    os << "curves =";
    for (const auto& [cid, end] : j.ends) os << ' ' << cid << ':' << end;
    os << "\n";
    os << "line_tension = " << fmt(j.line_tension) << "\n";
    os << "mobility = " << fmt(j.mobility) << "\n";
    os << "transfer = " << j.transfer << "\n";
    os << "L = " << fmt(j.transfer_coefficient) << "\n";
    os << "pinned_horizontal = " << (j.pinned_horizontal ? "true" : "false") << "\n";
  }
  os << "\n[topology]\n";
  for (const RegionSpec& r : c.regions) {
    os << "region." << r.phase << " =";
    if (r.include_box) os << " box";
    for (const auto& [cid, rev] : r.items) os << ' ' << cid << ':' << (rev ? "rev" : "fwd");
    os << "\n";
  }
  return os.str();
}

SimState build_state(const ScenarioConfig& cfg) {
  SimState st;
  st.mode = cfg.mode == "planar" ? GeometryMode::Planar : GeometryMode::Axisymmetric;
  st.topology.box = cfg.box;

  for (const PhaseSpec& p : cfg.phases) {
    st.phases.push_back(PhaseReservoir{p.label, p.mass, p.eos});
    st.topology.phases.push_back(p.label);
  }

  for (const CurveSpec& cv : cfg.curves) {
    MarkerCurve mc;
    mc.id = cv.id;
    mc.mode = st.mode;
    mc.side_minus = cv.side_minus;
    mc.side_plus = cv.side_plus;
    if (cv.constraint == "horizontal") mc.constraint = CurveConstraint::Horizontal;
    else if (cv.constraint == "fixed") mc.constraint = CurveConstraint::Fixed;
    if (cv.kind == "arc") {
      mc.closed = std::abs(std::abs(cv.angle_end_deg - cv.angle_start_deg) - 360.0) < 1e-9;
      mc.markers = arc_markers(cv, mc.closed);
    } else {
      mc.markers = chain_markers(cv);
    }
    mc.segment_mass.assign(mc.n_segments(), 0.0);
    for (int s = 0; s < mc.n_segments(); ++s)
      mc.segment_mass[s] = cv.rho_s * segment_measure(mc, s);
    st.curves.push_back(std::move(mc));
  }

  const double scale = cfg.box.scale();
  for (const JunctionSpec& js : cfg.junctions) {
    TripleJunction j;
    j.id = js.id;
    j.line_tension = js.line_tension;
    j.mobility = js.mobility > 0.0 ? js.mobility : cfg.m_c;
    j.pinned_horizontal = js.pinned_horizontal;
    if (js.transfer == "linear") j.closure.mode = JunctionClosure::Mode::Linear;
    else if (js.transfer == "ideal") j.closure.mode = JunctionClosure::Mode::Ideal;
    j.closure.transfer_coefficient = js.transfer_coefficient;
    const int jidx = static_cast<int>(st.junctions.size());
    for (int k = 0; k < 3; ++k) {
      const auto& [cid, end] = js.ends[k];
      const int ci = st.curve_index(cid);
      const bool at_start = end == "start";
      j.incident[k] = CurveEnd{ci, at_start};
      MarkerCurve& mc = st.curves[ci];
      Endpoint& ep = at_start ? mc.end_start : mc.end_end;
      if (ep.kind != EndpointKind::Free)
        fail(Err::ValidationError,
             "curve " + cid + ": endpoint attached to more than one junction");
      ep = Endpoint{EndpointKind::Junction, jidx};
    }
    // junction position: first listed end; snap the others onto it exactly
    {
      const CurveEnd& e0 = j.incident[0];
      const MarkerCurve& c0 = st.curves[e0.curve];
      j.position = e0.at_start ? c0.markers.front() : c0.markers.back();
    }
    for (const CurveEnd& e : j.incident) {
      MarkerCurve& mc = st.curves[e.curve];
      Vec2& p = e.at_start ? mc.markers.front() : mc.markers.back();
      if (norm(p - j.position) > 1e-9 * scale)
        fail(Err::ValidationError, "junction " + js.id + ": endpoint of curve " +
                                       mc.id + " does not coincide with the junction");
      p = j.position;
    }
    st.junctions.push_back(std::move(j));
  }

  // classify the remaining open ends: on the box boundary or free
  const double wall_tol = 1e-9 * scale;
  for (MarkerCurve& mc : st.curves) {
    if (mc.closed) continue;
    auto classify = [&](Endpoint& ep, const Vec2& p) {
      if (ep.kind != EndpointKind::Free) return;
      const DomainBox& b = cfg.box;
      if (std::abs(p.x - b.x0) <= wall_tol || std::abs(p.x - b.x1) <= wall_tol ||
          std::abs(p.y - b.y0) <= wall_tol || std::abs(p.y - b.y1) <= wall_tol)
        ep.kind = EndpointKind::OuterBoundary;
    };
    classify(mc.end_start, mc.markers.front());
    classify(mc.end_end, mc.markers.back());
  }

  for (const RegionSpec& rs : cfg.regions) {
    RegionLoop loop;
    loop.phase = rs.phase;
    loop.include_box = rs.include_box;
    for (const auto& [cid, rev] : rs.items)
      loop.items.push_back(LoopItem{st.curve_index(cid), rev});
    st.topology.regions.push_back(std::move(loop));
  }

  // geometry validity
  std::vector<std::string> errors;
  for (const MarkerCurve& mc : st.curves) validate_curve(mc, scale, errors);
  for (const TripleJunction& j : st.junctions)
    validate_junction(j, st.curves, scale, 5.0, errors);
  try {
    region_measure(st.topology, st.curves);
  } catch (const TrilineError& e) {
    errors.push_back(e.what());
  }
  if (!errors.empty()) {
    std::ostringstream os;
    os << "initial geometry invalid: " << errors.size() << " error(s):";
    for (const std::string& s : errors) os << "\n  - " << s;
    fail(Err::ValidationError, os.str());
  }
  return st;
}

RunConfig build_run_config(const ScenarioConfig& cfg) {
  RunConfig rc;
  rc.mobility.m_n = cfg.m_n;
  rc.mobility.m_c = cfg.m_c;
  rc.mobility.dt = cfg.dt;
  rc.mobility.cfl_safety = cfg.cfl_safety;
  rc.integrator = cfg.integrator == "rk2" ? Integrator::Rk2 : Integrator::Euler;
  rc.t_end = cfg.t_end;
  rc.convergence_vmax = cfg.convergence_vmax;
  rc.output_every = cfg.output_every;
  rc.snapshot_every = cfg.snapshot_every;
  rc.remesh_every = cfg.remesh_every;
  rc.remesh_h = cfg.remesh_h;
  rc.scenario_text = serialize_scenario(cfg);

  rc.closures.per_curve.resize(cfg.curves.size());
  for (size_t c = 0; c < cfg.curves.size(); ++c) {
    CurvePhysics& phys = rc.closures.per_curve[c];
    const std::string& id = cfg.curves[c].id;
    phys.eos = cfg.surface_eos.at(id);
    for (const SlipSpec& s : cfg.slip)
      if (s.curve == id) {
        phys.slip_on = true;
        phys.slip = s.params;
      }
    for (const SorptionSpec& s : cfg.sorption)
      if (s.curve == id) {
        if (s.side == "plus") {
          phys.sorption_plus_on = true;
          phys.sorption_plus = s.params;
        } else {
          phys.sorption_minus_on = true;
          phys.sorption_minus = s.params;
        }
      }
  }
  return rc;
}

// ---- presets -------------------------------------------------------------------

namespace {

// Two lobes pressed together inside a box; three interfaces, two junctions.
// Full physics: sorption on every side, slip, linear junction transfer.
// psi_offset places the sorption isotherm equilibrium near rho_s = 0.2.
constexpr const char* kLensEqual = R"(# liquid lens, equal clean tensions, full transfer physics
[general]
mode = planar
t_end = 0.05
dt = 5e-6
cfl_safety = 0.45
m_n = 1.0
m_c = 1.0
convergence_vmax = 0
integrator = euler
output_every = 100
remesh_every = 100
remesh_h = 0.0079

[domain]
box = -2 -1.5 2 1.5

[phase.lobeL]
mass = 0.40055
[eos.bulk.lobeL]
rho_ref = 1.0
p_ref = 3.4
c2 = 20.0

[phase.lobeR]
mass = 0.40055
[eos.bulk.lobeR]
rho_ref = 1.0
p_ref = 3.4
c2 = 20.0

[phase.ambient]
mass = 11.2146
[eos.bulk.ambient]
rho_ref = 1.0
p_ref = 1.0
c2 = 20.0

[curve.left]
kind = arc
center = 0 0
radius = 0.5
angles = 90 270
markers = 200
rho_s = 0.2
side_minus = ambient
side_plus = lobeL
constraint = free

[eos.surface.left]
gamma0 = 1.0
rho_star = 4.0
psi_offset = 20.152359478108525

[curve.right]
kind = arc
center = 0 0
radius = 0.5
angles = 270 450
markers = 200
rho_s = 0.2
side_minus = ambient
side_plus = lobeR
constraint = free

[eos.surface.right]
gamma0 = 1.0
rho_star = 4.0
psi_offset = 20.152359478108525

[curve.mid]
kind = chain
points = 0 0.5 0 -0.5
markers = 200
rho_s = 0.2
side_minus = lobeL
side_plus = lobeR
constraint = free

[eos.surface.mid]
gamma0 = 1.0
rho_star = 4.0
psi_offset = 20.152359478108525

[slip.left]
beta_plus = 1.0
beta_minus = 1.0
[slip.right]
beta_plus = 1.0
beta_minus = 1.0
[slip.mid]
beta_plus = 1.0
beta_minus = 1.0

[sorption.left.plus]
a_sigma = 1.0
k_de = 50.0
[sorption.left.minus]
a_sigma = 1.0
k_de = 50.0
[sorption.right.plus]
a_sigma = 1.0
k_de = 50.0
[sorption.right.minus]
a_sigma = 1.0
k_de = 50.0
[sorption.mid.plus]
a_sigma = 1.0
k_de = 50.0
[sorption.mid.minus]
a_sigma = 1.0
k_de = 50.0

[junction.T]
curves = left:start right:end mid:start
line_tension = 0.0
mobility = 1.0
transfer = linear
L = 5.0

[junction.B]
curves = left:end right:start mid:end
line_tension = 0.0
mobility = 1.0
transfer = linear
L = 5.0

[topology]
region.lobeL = left:fwd mid:rev
region.lobeR = mid:fwd right:fwd
region.ambient = box left:rev right:rev
)";

constexpr const char* kLensUnequal = R"(# liquid lens, clean tensions 0.6 / 0.8 / 1.0, no mass transfer
[general]
mode = planar
t_end = 3.0
dt = 5e-5
cfl_safety = 0.45
m_n = 1.0
m_c = 1.0
convergence_vmax = 3e-7
integrator = euler
output_every = 200
remesh_every = 50
remesh_h = 0.0177

[domain]
box = -2 -1.5 2 1.5

[phase.lobeL]
mass = 0.40055
[eos.bulk.lobeL]
rho_ref = 1.0
p_ref = 1.0
c2 = 20.0

[phase.lobeR]
mass = 0.40055
[eos.bulk.lobeR]
rho_ref = 1.0
p_ref = 1.0
c2 = 20.0

[phase.ambient]
mass = 11.2146
[eos.bulk.ambient]
rho_ref = 1.0
p_ref = 1.0
c2 = 20.0

[curve.left]
kind = arc
center = 0 0
radius = 0.5
angles = 90 270
markers = 90
rho_s = 0.0
side_minus = ambient
side_plus = lobeL
constraint = free

[eos.surface.left]
gamma0 = 0.6
rho_star = 4.0
psi_offset = 0.0

[curve.right]
kind = arc
center = 0 0
radius = 0.5
angles = 270 450
markers = 90
rho_s = 0.0
side_minus = ambient
side_plus = lobeR
constraint = free

[eos.surface.right]
gamma0 = 0.8
rho_star = 4.0
psi_offset = 0.0

[curve.mid]
kind = chain
points = 0 0.5 0 -0.5
markers = 57
rho_s = 0.0
side_minus = lobeL
side_plus = lobeR
constraint = free

[eos.surface.mid]
gamma0 = 1.0
rho_star = 4.0
psi_offset = 0.0

[junction.T]
curves = left:start right:end mid:start
line_tension = 0.0
mobility = 1.0
transfer = off
L = 0.0

[junction.B]
curves = left:end right:start mid:end
line_tension = 0.0
mobility = 1.0
transfer = off
L = 0.0

[topology]
region.lobeL = left:fwd mid:rev
region.lobeR = mid:fwd right:fwd
region.ambient = box left:rev right:rev
)";

constexpr const char* kDroplet = R"(# single circular droplet relaxing to the Young-Laplace balance
[general]
mode = planar
t_end = 2.0
dt = 2e-4
cfl_safety = 0.45
m_n = 1.0
m_c = 0.0
convergence_vmax = 1e-9
integrator = euler
output_every = 100
remesh_every = 0
remesh_h = 0.0

[domain]
box = -2 -2 2 2

[phase.drop]
mass = 3.2201324699295376
[eos.bulk.drop]
rho_ref = 1.0
p_ref = 1.0
c2 = 20.0

[phase.ambient]
mass = 12.536947162749952
[eos.bulk.ambient]
rho_ref = 1.0
p_ref = 1.0
c2 = 20.0

[curve.rim]
kind = arc
center = 0 0
radius = 1.0
angles = 0 360
markers = 200
rho_s = 0.0
side_minus = ambient
side_plus = drop
constraint = free

[eos.surface.rim]
gamma0 = 1.0
rho_star = 4.0
psi_offset = 0.0

[topology]
region.drop = rim:fwd
region.ambient = box rim:rev
)";

constexpr const char* kYoungPinned = R"(# sessile cap on a pinned flat interface pair; Young's-law analogue
[general]
mode = planar
t_end = 4.0
dt = 4e-5
cfl_safety = 0.45
m_n = 1.0
m_c = 1.0
convergence_vmax = 5e-7
integrator = euler
output_every = 500
remesh_every = 50
remesh_h = 0.0159

[domain]
box = -2 -1 2 1

[phase.drop]
mass = 0.40055
[eos.bulk.drop]
rho_ref = 1.0
p_ref = 1.0
c2 = 20.0

[phase.ambient]
mass = 3.6073
[eos.bulk.ambient]
rho_ref = 1.0
p_ref = 1.0
c2 = 20.0

[phase.substrate]
mass = 4.0
[eos.bulk.substrate]
rho_ref = 1.0
p_ref = 1.0
c2 = 20.0

[curve.cap]
kind = arc
center = 0 0
radius = 0.5
angles = 180 0
markers = 100
rho_s = 0.0
side_minus = drop
side_plus = ambient
constraint = free

[eos.surface.cap]
gamma0 = 1.0
rho_star = 4.0
psi_offset = 0.0

[curve.sub_mid]
kind = chain
points = -0.5 0 0.5 0
markers = 64
rho_s = 0.0
side_minus = substrate
side_plus = drop
constraint = horizontal

[eos.surface.sub_mid]
gamma0 = 0.3
rho_star = 4.0
psi_offset = 0.0

[curve.sub_left]
kind = chain
points = -2 0 -0.5 0
markers = 95
rho_s = 0.0
side_minus = substrate
side_plus = ambient
constraint = horizontal

[eos.surface.sub_left]
gamma0 = 0.8
rho_star = 4.0
psi_offset = 0.0

[curve.sub_right]
kind = chain
points = 0.5 0 2 0
markers = 95
rho_s = 0.0
side_minus = substrate
side_plus = ambient
constraint = horizontal

[eos.surface.sub_right]
gamma0 = 0.8
rho_star = 4.0
psi_offset = 0.0

[junction.L]
curves = cap:start sub_mid:start sub_left:end
line_tension = 0.0
mobility = 1.0
transfer = off
L = 0.0
pinned_horizontal = true

[junction.R]
curves = cap:end sub_mid:end sub_right:start
line_tension = 0.0
mobility = 1.0
transfer = off
L = 0.0
pinned_horizontal = true

[topology]
region.drop = cap:rev sub_mid:fwd
region.ambient = sub_left:fwd cap:fwd sub_right:fwd
region.substrate = sub_right:rev sub_mid:rev sub_left:rev
)";

constexpr const char* kLensAxisym = R"(# axisymmetric floating lens with a junction ring and line tension
[general]
mode = axisymmetric
t_end = 0.01
dt = 1e-5
cfl_safety = 0.45
m_n = 1.0
m_c = 1.0
convergence_vmax = 0
integrator = euler
output_every = 50
remesh_every = 100
remesh_h = 0.008

[domain]
box = 0 -1 1.5 1

[phase.drop]
mass = 0.5340707511102648
[eos.bulk.drop]
rho_ref = 1.0
p_ref = 4.8
c2 = 10.0

[phase.upper]
mass = 6.806784082777885
[eos.bulk.upper]
rho_ref = 1.0
p_ref = 1.0
c2 = 10.0

[phase.lower]
mass = 6.806784082777885
[eos.bulk.lower]
rho_ref = 1.0
p_ref = 1.0
c2 = 10.0

[curve.cap]
kind = arc
center = 0 0
radius = 0.5
angles = 90 0
markers = 100
rho_s = 0.2
side_minus = drop
side_plus = upper
constraint = free

[eos.surface.cap]
gamma0 = 1.0
rho_star = 4.0
psi_offset = 10.152359478108525

[curve.bot]
kind = arc
center = 0 0
radius = 0.5
angles = 270 360
markers = 100
rho_s = 0.2
side_minus = lower
side_plus = drop
constraint = free

[eos.surface.bot]
gamma0 = 1.0
rho_star = 4.0
psi_offset = 10.152359478108525

[curve.flat]
kind = chain
points = 0.5 0 1.5 0
markers = 100
rho_s = 0.2
side_minus = lower
side_plus = upper
constraint = free

[eos.surface.flat]
gamma0 = 1.0
rho_star = 4.0
psi_offset = 10.152359478108525

[sorption.cap.plus]
a_sigma = 1.0
k_de = 20.0
[sorption.bot.minus]
a_sigma = 1.0
k_de = 20.0
[sorption.flat.plus]
a_sigma = 1.0
k_de = 20.0
[sorption.flat.minus]
a_sigma = 1.0
k_de = 20.0

[junction.ring]
curves = cap:end bot:end flat:start
line_tension = 0.05
mobility = 1.0
transfer = linear
L = 2.0

[topology]
region.drop = cap:rev bot:fwd
region.upper = cap:fwd flat:fwd
region.lower = flat:rev bot:rev
)";

constexpr const char* kChemFlat = R"(# flat interface between balanced reservoirs with two-sided sorption
[general]
mode = planar
t_end = 1.5
dt = 2e-4
cfl_safety = 0.5
m_n = 1.0
m_c = 0.0
convergence_vmax = 0
integrator = euler
output_every = 10
remesh_every = 0
remesh_h = 0.0

[domain]
box = -1 -1 1 1

[phase.top]
mass = 2.0
[eos.bulk.top]
rho_ref = 1.0
p_ref = 1.0
c2 = 5.0

[phase.bottom]
mass = 2.0
[eos.bulk.bottom]
rho_ref = 1.0
p_ref = 1.0
c2 = 5.0

[curve.flat]
kind = chain
points = -1 0 1 0
markers = 80
rho_s = 0.3
side_minus = bottom
side_plus = top
constraint = free

[eos.surface.flat]
gamma0 = 1.0
rho_star = 4.0
psi_offset = 5.152359478108525

[sorption.flat.plus]
a_sigma = 1.0
k_de = 50.0
[sorption.flat.minus]
a_sigma = 1.0
k_de = 50.0

[topology]
region.top = flat:fwd
region.bottom = flat:rev
)";


// Three pinned straight interfaces meeting at 120 degrees; surface mass
// equilibrates through the linear junction closure alone.
constexpr const char* kJunctionStar = R"(# pinned three-curve star exercising the junction transfer closure
[general]
mode = planar
t_end = 0.3
dt = 2e-4
cfl_safety = 0.5
m_n = 1.0
m_c = 0.0
convergence_vmax = 0
integrator = euler
output_every = 10
remesh_every = 0
remesh_h = 0.0

[domain]
box = -2 -2 2 2

[phase.wedgeA]
mass = 5.154700538379252
[eos.bulk.wedgeA]
rho_ref = 1.0
p_ref = 1.0
c2 = 5.0

[phase.wedgeB]
mass = 5.690598923241497
[eos.bulk.wedgeB]
rho_ref = 1.0
p_ref = 1.0
c2 = 5.0

[phase.wedgeC]
mass = 5.154700538379252
[eos.bulk.wedgeC]
rho_ref = 1.0
p_ref = 1.0
c2 = 5.0

[curve.arm1]
kind = chain
points = 0 0 0 2
markers = 60
rho_s = 0.2
side_minus = wedgeC
side_plus = wedgeA
constraint = fixed

[eos.surface.arm1]
gamma0 = 1.0
rho_star = 4.0
psi_offset = 0.0

[curve.arm2]
kind = chain
points = 0 0 -2 -1.1547005383792515
markers = 60
rho_s = 0.3
side_minus = wedgeA
side_plus = wedgeB
constraint = fixed

[eos.surface.arm2]
gamma0 = 1.0
rho_star = 4.0
psi_offset = 0.0

[curve.arm3]
kind = chain
points = 0 0 2 -1.1547005383792515
markers = 60
rho_s = 0.45
side_minus = wedgeB
side_plus = wedgeC
constraint = fixed

[eos.surface.arm3]
gamma0 = 1.0
rho_star = 4.0
psi_offset = 0.0

[junction.star]
curves = arm1:start arm2:start arm3:start
line_tension = 0.0
mobility = 0.0
transfer = linear
L = 5.0

[topology]
region.wedgeA = arm1:fwd arm2:rev
region.wedgeB = arm2:fwd arm3:rev
region.wedgeC = arm3:fwd arm1:rev
)";


// Axisymmetric spherical droplet relaxing to the Young-Laplace balance
// (jump = 2 gamma / R); the generator ends slide on the axis.
constexpr const char* kDropletAxisym = R"(# axisymmetric droplet relaxing to the spherical Laplace balance
[general]
mode = axisymmetric
t_end = 1.5
dt = 1e-4
cfl_safety = 0.45
m_n = 1.0
m_c = 0.0
convergence_vmax = 1e-9
integrator = euler
output_every = 100
remesh_every = 0
remesh_h = 0.0

[domain]
box = 0 -2 2 2

[phase.drop]
mass = 4.398229715025711
[eos.bulk.drop]
rho_ref = 1.0
p_ref = 1.0
c2 = 20.0

[phase.ambient]
mass = 43.77268531892857
[eos.bulk.ambient]
rho_ref = 1.0
p_ref = 1.0
c2 = 20.0

[curve.gen]
kind = arc
center = 0 0
radius = 1.0
angles = 90 -90
markers = 100
rho_s = 0.0
side_minus = drop
side_plus = ambient
constraint = free

[eos.surface.gen]
gamma0 = 1.0
rho_star = 4.0
psi_offset = 0.0

[topology]
region.drop = gen:rev
region.ambient = gen:fwd
)";

struct PresetEntry {
  const char* name;
  const char* text;
};

constexpr PresetEntry kPresets[] = {
    {"lens_equal_tensions", kLensEqual},   {"lens_unequal_tensions", kLensUnequal},
    {"droplet", kDroplet},                 {"droplet_axisym", kDropletAxisym},
    {"young_pinned", kYoungPinned},
    {"lens_axisym", kLensAxisym},          {"chem_flat", kChemFlat},
    {"junction_star", kJunctionStar},
};

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const PresetEntry& p : kPresets) out.push_back(p.name);
  return out;
}

Scenario load_preset(const std::string& name) {
  for (const PresetEntry& p : kPresets)
    if (name == p.name) return load_scenario_text(p.text, "preset:" + name);
  fail(Err::IoError, "unknown preset '" + name + "'");
}

Scenario load_scenario_or_preset(const std::string& path_or_name) {
  if (std::filesystem::exists(path_or_name)) return load_scenario(path_or_name);
  for (const PresetEntry& p : kPresets)
    if (path_or_name == p.name) return load_preset(path_or_name);
  fail(Err::IoError, "no scenario file or preset named '" + path_or_name + "'");
}

}  // namespace triline
