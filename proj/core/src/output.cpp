#include "cellscale/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "cellscale/errors.hpp"
#include "cellscale/format.hpp"

namespace cellscale {

namespace {

std::string fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string opt(const std::optional<double>& v) { return v ? fmt_real(*v) : std::string(); }

}  // namespace

void write_rows_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "n,seed,protocol,feasible_rate,regime,overspread_fraction,infeasible_route_fraction\n";
  for (const auto& r : rows) {
    os << r.n << ',' << r.seed << ',' << to_string(r.protocol) << ',' << fmt_real(r.feasible_rate) << ','
       << to_string(r.regime) << ',' << fmt_real(r.overspread_fraction) << ',' << fmt_real(r.infeasible_route_fraction)
       << '\n';
  }
}

void write_summary_csv(std::ostream& os, const std::vector<ProtocolSummary>& summaries) {
  os << "protocol,slope,ci_low,ci_high,theory,pass\n";
  for (const auto& s : summaries) {
    os << to_string(s.protocol) << ',' << fmt_real(s.fit.slope) << ',' << fmt_real(s.fit.ci_low) << ','
       << fmt_real(s.fit.ci_high) << ',' << fmt_real(s.comparison.theory) << ','
       << (s.comparison.pass ? "true" : "false") << '\n';
  }
}

std::vector<RegimeMapPoint> run_regime_map(const ScalingExponents& e, const std::vector<double>& grid,
                                           const SweepSettings& settings, const RateLawConstants& c, bool measure) {
  const auto curve = exponent_curve(e, grid);
  std::vector<RegimeMapPoint> out;
  out.reserve(curve.size());
  for (const auto& pt : curve) {
    RegimeMapPoint rp{pt, std::nullopt, std::nullopt};
    if (measure) {
      ScalingExponents at = e;
      at.psi = pt.dof_exponent - e.gamma;
      const SweepResult res = run_sweep(at, settings, c);
      if (const auto* s = res.summary(Protocol::Ish); s && std::isfinite(s->fit.slope)) rp.ish_measured = s->fit.slope;
      if (const auto* s = res.summary(Protocol::Imh); s && std::isfinite(s->fit.slope)) rp.imh_measured = s->fit.slope;
    }
    out.push_back(rp);
  }
  return out;
}

void write_regime_map_csv(std::ostream& os, const std::vector<RegimeMapPoint>& points) {
  os << "psi_plus_gamma,ish_theory,imh_theory,regime,ish_measured,imh_measured\n";
  for (const auto& p : points) {
    os << fmt_real(p.theory.dof_exponent) << ',' << fmt_real(p.theory.ish) << ',' << fmt_real(p.theory.imh) << ','
       << to_string(p.theory.regime) << ',' << opt(p.ish_measured) << ',' << opt(p.imh_measured) << '\n';
  }
}

void write_regime_map_svg(std::ostream& os, const std::vector<RegimeMapPoint>& points, const ScalingExponents& e) {
  constexpr double kW = 640, kH = 420, kLeft = 70, kRight = 20, kTop = 40, kBottom = 60;
  double x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 0.0;
  bool first = true;
  for (const auto& p : points) {
    const double x = p.theory.dof_exponent;
    x_hi = first ? std::max(x, 1e-9) : std::max(x_hi, x);
    x_lo = first ? std::min(0.0, x) : std::min(x_lo, x);
    for (const double y : {p.theory.ish, p.theory.imh, p.ish_measured.value_or(p.theory.ish),
                           p.imh_measured.value_or(p.theory.imh)}) {
      y_lo = first ? y : std::min(y_lo, y);
      y_hi = first ? y : std::max(y_hi, y);
      first = false;
    }
  }
  y_lo = std::floor(y_lo * 2.0) / 2.0 - 0.25;
  y_hi = std::ceil(y_hi * 2.0) / 2.0 + 0.25;
  if (x_hi <= x_lo) x_hi = x_lo + 1.0;
  const auto sx = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * (kW - kLeft - kRight); };
  const auto sy = [&](double y) { return kH - kBottom - (y - y_lo) / (y_hi - y_lo) * (kH - kTop - kBottom); };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\" viewBox=\"0 0 "
     << kW << ' ' << kH << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kW / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">Downlink rate exponents (beta="
     << fixed(e.beta) << ", nu=" << fixed(e.nu) << ", gamma=" << fixed(e.gamma) << ", alpha=" << fixed(e.alpha)
     << ")</text>\n";

  // Axes, ticks and grid.
  os << "<g stroke=\"black\" fill=\"none\"><line x1=\"" << fixed(sx(x_lo)) << "\" y1=\"" << fixed(sy(y_lo))
     << "\" x2=\"" << fixed(sx(x_hi)) << "\" y2=\"" << fixed(sy(y_lo)) << "\"/><line x1=\"" << fixed(sx(x_lo))
     << "\" y1=\"" << fixed(sy(y_lo)) << "\" x2=\"" << fixed(sx(x_lo)) << "\" y2=\"" << fixed(sy(y_hi))
     << "\"/></g>\n";
  const double x_step = (x_hi - x_lo) > 4.0 ? 1.0 : 0.5;
  for (double x = std::ceil(x_lo / x_step) * x_step; x <= x_hi + 1e-9; x += x_step) {
    os << "<line x1=\"" << fixed(sx(x)) << "\" y1=\"" << fixed(sy(y_lo)) << "\" x2=\"" << fixed(sx(x)) << "\" y2=\""
       << fixed(sy(y_hi)) << "\" stroke=\"#ddd\"/>"
       << "<text x=\"" << fixed(sx(x)) << "\" y=\"" << fixed(sy(y_lo) + 16) << "\" text-anchor=\"middle\">"
       << fixed(x) << "</text>\n";
  }
  for (double y = std::ceil(y_lo * 2.0) / 2.0; y <= y_hi + 1e-9; y += 0.5) {
    os << "<line x1=\"" << fixed(sx(x_lo)) << "\" y1=\"" << fixed(sy(y)) << "\" x2=\"" << fixed(sx(x_hi)) << "\" y2=\""
       << fixed(sy(y)) << "\" stroke=\"#ddd\"/>"
       << "<text x=\"" << fixed(sx(x_lo) - 6) << "\" y=\"" << fixed(sy(y) + 4) << "\" text-anchor=\"end\">"
       << fixed(y) << "</text>\n";
  }
  os << "<text x=\"" << fixed((kLeft + kW - kRight) / 2) << "\" y=\"" << fixed(kH - 18)
     << "\" text-anchor=\"middle\">psi + gamma</text>\n";
  os << "<text x=\"18\" y=\"" << fixed((kTop + kH - kBottom) / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
     << fixed((kTop + kH - kBottom) / 2) << ")\">rate exponent</text>\n";

  const auto polyline = [&](auto value, const char* color, const char* dash) {
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\"" << dash << " points=\"";
    for (std::size_t i = 0; i < points.size(); ++i) {
      os << (i ? " " : "") << fixed(sx(points[i].theory.dof_exponent)) << ',' << fixed(sy(value(points[i])));
    }
    os << "\"/>\n";
  };
  polyline([](const RegimeMapPoint& p) { return p.theory.ish; }, "#1f77b4", "");
  polyline([](const RegimeMapPoint& p) { return p.theory.imh; }, "#d62728", " stroke-dasharray=\"6 4\"");
  for (const auto& p : points) {
    if (p.ish_measured) {
      os << "<circle cx=\"" << fixed(sx(p.theory.dof_exponent)) << "\" cy=\"" << fixed(sy(*p.ish_measured))
         << "\" r=\"4\" fill=\"#1f77b4\"/>\n";
    }
    if (p.imh_measured) {
      const double cx = sx(p.theory.dof_exponent), cy = sy(*p.imh_measured);
      os << "<rect x=\"" << fixed(cx - 4) << "\" y=\"" << fixed(cy - 4)
         << "\" width=\"8\" height=\"8\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.5\"/>\n";
    }
  }
  const double lx = kLeft + 12, ly = kTop + 8;
  os << "<g><line x1=\"" << fixed(lx) << "\" y1=\"" << fixed(ly) << "\" x2=\"" << fixed(lx + 24) << "\" y2=\""
     << fixed(ly) << "\" stroke=\"#1f77b4\" stroke-width=\"2\"/><text x=\"" << fixed(lx + 30) << "\" y=\""
     << fixed(ly + 4) << "\">ISH theory</text>"
     << "<line x1=\"" << fixed(lx) << "\" y1=\"" << fixed(ly + 18) << "\" x2=\"" << fixed(lx + 24) << "\" y2=\""
     << fixed(ly + 18) << "\" stroke=\"#d62728\" stroke-width=\"2\" stroke-dasharray=\"6 4\"/><text x=\""
     << fixed(lx + 30) << "\" y=\"" << fixed(ly + 22) << "\">IMH theory</text>"
     << "<circle cx=\"" << fixed(lx + 12) << "\" cy=\"" << fixed(ly + 36) << "\" r=\"4\" fill=\"#1f77b4\"/><text x=\""
     << fixed(lx + 30) << "\" y=\"" << fixed(ly + 40) << "\">ISH measured</text>"
     << "<rect x=\"" << fixed(lx + 8) << "\" y=\"" << fixed(ly + 50)
     << "\" width=\"8\" height=\"8\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.5\"/><text x=\""
     << fixed(lx + 30) << "\" y=\"" << fixed(ly + 58) << "\">IMH measured</text></g>\n";
  os << "</svg>\n";
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  return out;
}

OutputPaths emit_outputs(const SweepResult& result, const std::filesystem::path& dir) {
  OutputPaths paths{dir / "rows.csv", dir / "summary.csv"};
  {
    auto out = open_output(paths.rows);
    write_rows_csv(out, result.rows);
    if (!out) throw IoError("write failed for '" + paths.rows.string() + "'");
  }
  {
    auto out = open_output(paths.summary);
    write_summary_csv(out, result.summaries);
    if (!out) throw IoError("write failed for '" + paths.summary.string() + "'");
  }
  return paths;
}

}  // namespace cellscale
