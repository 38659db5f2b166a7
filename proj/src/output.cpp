#include "output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace triline {

namespace {

constexpr const char* kUnitsNote =
    "# units: SI; in planar mode energies, masses and forces are per unit depth";

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string hexd(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%a", v);
  return buf;
}

double parse_double(const std::string& tok, const std::string& ctx) {
  try {
    size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (...) {
    fail(Err::ParseError, "bad number '" + tok + "' in " + ctx);
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) fail(Err::IoError, "cannot open " + path + " for writing");
  return f;
}

}  // namespace

void ensure_directory(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) fail(Err::IoError, "cannot create directory " + path + ": " + ec.message());
}

void write_snapshot(const std::string& path, const SimState& state) {
  std::ofstream f = open_out(path);
  f << kUnitsNote << "\n";
  f << "# t = " << fmt(state.time) << "\n";
  f << "curve_id marker_index x y segment_mass side_minus side_plus\n";
  for (const MarkerCurve& c : state.curves) {
    for (int i = 0; i < c.n_markers(); ++i) {
      const double m =
          i < c.n_segments() ? c.segment_mass[i] : (c.closed ? c.segment_mass[i] : 0.0);
      f << c.id << ' ' << i << ' ' << fmt(c.markers[i].x) << ' ' << fmt(c.markers[i].y) << ' '
        << fmt(m) << ' ' << c.side_minus << ' ' << c.side_plus << "\n";
    }
  }
}

void write_timeseries(const std::string& path, const std::vector<LedgerRow>& rows,
                      const SimState& state) {
  std::ofstream f = open_out(path);
  f << kUnitsNote << "\n";
  f << "t,E_total,E_bulk,E_interface,E_line,D_normal,D_slip,D_sorption,D_junction,M_total";
  for (const PhaseReservoir& ph : state.phases) f << ",M_" << ph.label;
  for (const TripleJunction& jn : state.junctions)
    f << ",J" << jn.id << "_angle_1,J" << jn.id << "_angle_2,J" << jn.id << "_angle_3,J" << jn.id
      << "_kirchhoff";
  f << ",max_V_sigma,max_speed\n";
  for (const LedgerRow& r : rows) {
    f << fmt(r.t) << ',' << fmt(r.E_total) << ',' << fmt(r.E_bulk) << ',' << fmt(r.E_interface)
      << ',' << fmt(r.E_line) << ',' << fmt(r.D_normal) << ',' << fmt(r.D_slip) << ','
      << fmt(r.D_sorption) << ',' << fmt(r.D_junction) << ',' << fmt(r.M_total);
    for (double m : r.M_phase) f << ',' << fmt(m);
    for (size_t j = 0; j < r.junction_angles_deg.size(); ++j) {
      for (double a : r.junction_angles_deg[j]) f << ',' << fmt(a);
      f << ',' << fmt(r.junction_kirchhoff[j]);
    }
    f << ',' << fmt(r.max_v_sigma) << ',' << fmt(r.max_speed) << "\n";
  }
}

// ---- checkpoint ----------------------------------------------------------------

namespace {

const char* endpoint_kind_name(EndpointKind k) {
  switch (k) {
    case EndpointKind::Free: return "free";
    case EndpointKind::OuterBoundary: return "outer";
    case EndpointKind::Junction: return "junction";
  }
  return "?";
}

EndpointKind endpoint_kind_parse(const std::string& s) {
  if (s == "free") return EndpointKind::Free;
  if (s == "outer") return EndpointKind::OuterBoundary;
  if (s == "junction") return EndpointKind::Junction;
  fail(Err::ParseError, "bad endpoint kind: " + s);
}

const char* constraint_name(CurveConstraint c) {
  switch (c) {
    case CurveConstraint::Free: return "free";
    case CurveConstraint::Horizontal: return "horizontal";
    case CurveConstraint::Fixed: return "fixed";
  }
  return "?";
}

CurveConstraint constraint_parse(const std::string& s) {
  if (s == "free") return CurveConstraint::Free;
  if (s == "horizontal") return CurveConstraint::Horizontal;
  if (s == "fixed") return CurveConstraint::Fixed;
  fail(Err::ParseError, "bad constraint: " + s);
}

const char* closure_mode_name(JunctionClosure::Mode m) {
  switch (m) {
    case JunctionClosure::Mode::Linear: return "linear";
    case JunctionClosure::Mode::Ideal: return "ideal";
    case JunctionClosure::Mode::Off: return "off";
  }
  return "?";
}

JunctionClosure::Mode closure_mode_parse(const std::string& s) {
  if (s == "linear") return JunctionClosure::Mode::Linear;
  if (s == "ideal") return JunctionClosure::Mode::Ideal;
  if (s == "off") return JunctionClosure::Mode::Off;
  fail(Err::ParseError, "bad junction closure mode: " + s);
}

}  // namespace

void write_checkpoint(const std::string& path, const std::string& scenario_text,
                      const SimState& state) {
  std::ofstream f = open_out(path);
  f << "triline-checkpoint v1\n";
  std::vector<std::string> lines;
  {
    std::istringstream is(scenario_text);
    std::string line;
    while (std::getline(is, line)) lines.push_back(line);
  }
  f << "scenario_lines " << lines.size() << "\n";
  for (const std::string& l : lines) f << l << "\n";
  f << "mode " << (state.mode == GeometryMode::Planar ? "planar" : "axisymmetric") << "\n";
  f << "time " << hexd(state.time) << " step " << state.step_count << "\n";
  const DomainBox& b = state.topology.box;
  f << "box " << hexd(b.x0) << ' ' << hexd(b.y0) << ' ' << hexd(b.x1) << ' ' << hexd(b.y1) << "\n";
  f << "phases " << state.phases.size() << "\n";
  for (const PhaseReservoir& ph : state.phases)
    f << ph.label << ' ' << hexd(ph.mass) << ' ' << hexd(ph.eos.rho_ref) << ' '
      << hexd(ph.eos.p_ref) << ' ' << hexd(ph.eos.c2) << "\n";
  f << "curves " << state.curves.size() << "\n";
  for (const MarkerCurve& c : state.curves) {
    f << c.id << ' ' << c.n_markers() << ' ' << (c.closed ? 1 : 0) << ' ' << c.side_minus << ' '
      << c.side_plus << ' ' << constraint_name(c.constraint) << ' '
      << endpoint_kind_name(c.end_start.kind) << ' ' << c.end_start.junction << ' '
      << endpoint_kind_name(c.end_end.kind) << ' ' << c.end_end.junction << "\n";
    for (const Vec2& p : c.markers) f << hexd(p.x) << ' ' << hexd(p.y) << "\n";
    for (double m : c.segment_mass) f << hexd(m) << "\n";
  }
  f << "junctions " << state.junctions.size() << "\n";
  for (const TripleJunction& j : state.junctions) {
    f << j.id << ' ' << hexd(j.position.x) << ' ' << hexd(j.position.y);
    for (const CurveEnd& e : j.incident) f << ' ' << e.curve << ' ' << (e.at_start ? 1 : 0);
    f << ' ' << hexd(j.line_tension) << ' ' << hexd(j.mobility) << ' '
      << closure_mode_name(j.closure.mode) << ' ' << hexd(j.closure.transfer_coefficient) << ' '
      << (j.pinned_horizontal ? 1 : 0) << "\n";
  }
  f << "regions " << state.topology.regions.size() << "\n";
  for (const RegionLoop& r : state.topology.regions) {
    f << r.phase << ' ' << (r.include_box ? 1 : 0) << ' ' << r.items.size();
    for (const LoopItem& it : r.items) f << ' ' << it.curve << ' ' << (it.reversed ? 1 : 0);
    f << "\n";
  }
}

Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(Err::IoError, "cannot open checkpoint " + path);
  std::string line;
  auto next_line = [&]() -> std::string {
    if (!std::getline(f, line)) fail(Err::ParseError, "truncated checkpoint " + path);
    return line;
  };
  if (next_line() != "triline-checkpoint v1")
    fail(Err::ParseError, "not a triline checkpoint: " + path);

  Checkpoint out;
  std::istringstream hs(next_line());
  std::string kw;
  size_t n_lines = 0;
  hs >> kw >> n_lines;
  if (kw != "scenario_lines") fail(Err::ParseError, "bad checkpoint header");
  std::ostringstream sc;
  for (size_t i = 0; i < n_lines; ++i) sc << next_line() << "\n";
  out.scenario_text = sc.str();

  SimState& st = out.state;
  {
    std::istringstream is(next_line());
    std::string mode;
    is >> kw >> mode;
    st.mode = mode == "planar" ? GeometryMode::Planar : GeometryMode::Axisymmetric;
  }
  {
    std::istringstream is(next_line());
    std::string t;
    is >> kw >> t;
    st.time = parse_double(t, "time");
    is >> kw >> st.step_count;
  }
  {
    std::istringstream is(next_line());
    std::string a, b, c, d;
    is >> kw >> a >> b >> c >> d;
    st.topology.box = {parse_double(a, "box"), parse_double(b, "box"), parse_double(c, "box"),
                       parse_double(d, "box")};
  }
  size_t n = 0;
  {
    std::istringstream is(next_line());
    is >> kw >> n;
  }
  for (size_t i = 0; i < n; ++i) {
    std::istringstream is(next_line());
    PhaseReservoir ph;
    std::string m, rr, pr, c2;
    is >> ph.label >> m >> rr >> pr >> c2;
    ph.mass = parse_double(m, "phase mass");
    ph.eos = {parse_double(rr, "eos"), parse_double(pr, "eos"), parse_double(c2, "eos")};
    st.phases.push_back(ph);
    st.topology.phases.push_back(ph.label);
  }
  {
    std::istringstream is(next_line());
    is >> kw >> n;
  }
  for (size_t i = 0; i < n; ++i) {
    std::istringstream is(next_line());
    MarkerCurve c;
    int nm = 0, closed = 0;
    std::string constraint, k0, k1;
    is >> c.id >> nm >> closed >> c.side_minus >> c.side_plus >> constraint >> k0 >>
        c.end_start.junction >> k1 >> c.end_end.junction;
    c.closed = closed != 0;
    c.constraint = constraint_parse(constraint);
    c.end_start.kind = endpoint_kind_parse(k0);
    c.end_end.kind = endpoint_kind_parse(k1);
    c.mode = st.mode;
    for (int q = 0; q < nm; ++q) {
      std::istringstream ml(next_line());
      std::string x, y;
      ml >> x >> y;
      c.markers.push_back({parse_double(x, "marker"), parse_double(y, "marker")});
    }
    const int ns = c.closed ? nm : nm - 1;
    for (int q = 0; q < ns; ++q) c.segment_mass.push_back(parse_double(next_line(), "mass"));
    st.curves.push_back(std::move(c));
  }
  {
    std::istringstream is(next_line());
    is >> kw >> n;
  }
  for (size_t i = 0; i < n; ++i) {
    std::istringstream is(next_line());
    TripleJunction j;
    std::string px, py, lt, mob, mode, L;
    is >> j.id >> px >> py;
    j.position = {parse_double(px, "junction"), parse_double(py, "junction")};
    for (CurveEnd& e : j.incident) {
      int s = 0;
      is >> e.curve >> s;
      e.at_start = s != 0;
    }
    int pinned = 0;
    is >> lt >> mob >> mode >> L >> pinned;
    j.line_tension = parse_double(lt, "junction");
    j.mobility = parse_double(mob, "junction");
    j.closure.mode = closure_mode_parse(mode);
    j.closure.transfer_coefficient = parse_double(L, "junction");
    j.pinned_horizontal = pinned != 0;
    st.junctions.push_back(j);
  }
  {
    std::istringstream is(next_line());
    is >> kw >> n;
  }
  for (size_t i = 0; i < n; ++i) {
    std::istringstream is(next_line());
    RegionLoop r;
    int inc = 0;
    size_t ni = 0;
    is >> r.phase >> inc >> ni;
    r.include_box = inc != 0;
    for (size_t q = 0; q < ni; ++q) {
      LoopItem it;
      int rev = 0;
      is >> it.curve >> rev;
      it.reversed = rev != 0;
      r.items.push_back(it);
    }
    st.topology.regions.push_back(std::move(r));
  }
  return out;
}

// ---- report ---------------------------------------------------------------------

namespace {

struct CsvData {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

CsvData read_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(Err::IoError, "cannot open " + path);
  CsvData out;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) cells.push_back(cell);
    if (out.header.empty()) {
      out.header = cells;
      continue;
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const std::string& c : cells) row.push_back(parse_double(c, path));
    if (row.size() != out.header.size())
      fail(Err::ParseError, "ragged CSV row in " + path);
    out.rows.push_back(std::move(row));
  }
  if (out.header.empty() || out.rows.empty()) fail(Err::ParseError, "empty CSV " + path);
  return out;
}

}  // namespace

std::string render_report_table(const std::string& csv_path) {
  const CsvData csv = read_csv(csv_path);
  const size_t ncol = csv.header.size();
  std::vector<size_t> width(ncol);
  for (size_t c = 0; c < ncol; ++c) width[c] = csv.header[c].size();
  // subsample to at most 32 body rows, always keeping first and last
  std::vector<size_t> pick;
  const size_t nrows = csv.rows.size();
  const size_t stride = std::max<size_t>(1, (nrows + 31) / 32);
  for (size_t i = 0; i < nrows; i += stride) pick.push_back(i);
  if (pick.back() != nrows - 1) pick.push_back(nrows - 1);

  std::vector<std::vector<std::string>> cells;
  for (size_t i : pick) {
    std::vector<std::string> row;
    for (size_t c = 0; c < ncol; ++c) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.6g", csv.rows[i][c]);
      row.emplace_back(buf);
      width[c] = std::max(width[c], row.back().size());
    }
    cells.push_back(std::move(row));
  }
  std::ostringstream os;
  auto emit = [&](const std::vector<std::string>& row) {
    for (size_t c = 0; c < ncol; ++c)
      os << std::setw(static_cast<int>(width[c]) + 2) << row[c];
    os << "\n";
  };
  emit(csv.header);
  for (const auto& row : cells) emit(row);

  auto col = [&](const std::string& name) -> int {
    for (size_t c = 0; c < ncol; ++c)
      if (csv.header[c] == name) return static_cast<int>(c);
    return -1;
  };
  const int ce = col("E_total"), cm = col("M_total");
  os << "\nrows: " << nrows;
  if (ce >= 0)
    os << "  E_total: " << csv.rows.front()[ce] << " -> " << csv.rows.back()[ce];
  if (cm >= 0 && csv.rows.front()[cm] != 0.0)
    os << "  mass drift: "
       << (csv.rows.back()[cm] - csv.rows.front()[cm]) / csv.rows.front()[cm];
  os << "\n";
  return os.str();
}

void render_timeseries_svg(const std::string& csv_path, const std::string& svg_path) {
  const CsvData csv = read_csv(csv_path);
  auto col = [&](const std::string& name) -> int {
    for (size_t c = 0; c < csv.header.size(); ++c)
      if (csv.header[c] == name) return static_cast<int>(c);
    fail(Err::ParseError, "column " + name + " missing in " + csv_path);
  };
  const int ct = col("t");
  const int ce = col("E_total");
  const std::vector<std::pair<int, const char*>> channels = {
      {col("D_normal"), "#1f77b4"},
      {col("D_slip"), "#ff7f0e"},
      {col("D_sorption"), "#2ca02c"},
      {col("D_junction"), "#d62728"}};

  const double W = 760, H = 300, ML = 70, MR = 20, MT = 24, MB = 34;
  auto panel = [&](std::ostringstream& os, double top, const std::vector<int>& cols,
                   const std::vector<const char*>& colors, const char* title) {
    double tmin = 1e300, tmax = -1e300, vmin = 1e300, vmax = -1e300;
    for (const auto& r : csv.rows) {
      tmin = std::min(tmin, r[ct]);
      tmax = std::max(tmax, r[ct]);
      for (int c : cols) {
        vmin = std::min(vmin, r[c]);
        vmax = std::max(vmax, r[c]);
      }
    }
    if (tmax <= tmin) tmax = tmin + 1.0;
    if (vmax <= vmin) vmax = vmin + 1.0;
    const double pad = 0.05 * (vmax - vmin);
    vmin -= pad;
    vmax += pad;
    auto X = [&](double t) { return ML + (t - tmin) / (tmax - tmin) * (W - ML - MR); };
    auto Y = [&](double v) { return top + MT + (vmax - v) / (vmax - vmin) * (H - MT - MB); };
    os << "<rect x='" << ML << "' y='" << top + MT << "' width='" << W - ML - MR << "' height='"
       << H - MT - MB << "' fill='none' stroke='#999'/>\n";
    os << "<text x='" << ML << "' y='" << top + 16 << "' font-size='13'>" << title << "</text>\n";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g", vmax);
    os << "<text x='4' y='" << top + MT + 10 << "' font-size='11'>" << buf << "</text>\n";
    std::snprintf(buf, sizeof(buf), "%.4g", vmin);
    os << "<text x='4' y='" << top + H - MB << "' font-size='11'>" << buf << "</text>\n";
    std::snprintf(buf, sizeof(buf), "%.4g", tmax);
    os << "<text x='" << W - MR - 40 << "' y='" << top + H - 12 << "' font-size='11'>t=" << buf
       << "</text>\n";
    for (size_t k = 0; k < cols.size(); ++k) {
      os << "<polyline fill='none' stroke='" << colors[k] << "' stroke-width='1.3' points='";
      for (const auto& r : csv.rows) os << X(r[ct]) << ',' << Y(r[cols[k]]) << ' ';
      os << "'/>\n";
      os << "<text x='" << ML + 8 + 110 * k << "' y='" << top + MT + 14 << "' font-size='11' fill='"
         << colors[k] << "'>" << csv.header[cols[k]] << "</text>\n";
    }
  };

  std::ostringstream os;
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << 2 * H
     << "' font-family='sans-serif'>\n";
  panel(os, 0, {ce}, {"#333333"}, "available energy");
  {
    std::vector<int> cols;
    std::vector<const char*> colors;
    for (const auto& [c, color] : channels) {
      cols.push_back(c);
      colors.push_back(color);
    }
    panel(os, H, cols, colors, "dissipation channels");
  }
  os << "</svg>\n";
  std::ofstream f = open_out(svg_path);
  f << os.str();
}

}  // namespace triline
