#include "eql/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace eql {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", x == 0.0 ? 0.0 : x);  // no "-0.0000" from signed zeros
  std::string s = buf;
  return s == "-0.0000" ? "0.0000" : s;
}

class Canvas {
 public:
  explicit Canvas(const SvgStyle& style) : style_(style) {
    half_ = 0.5 * style.size;
    scale_ = half_ * (1.0 - 2.0 * style.margin);
  }

  std::string x(Complex z) const { return fmt(half_ + scale_ * z.real()); }
  std::string y(Complex z) const { return fmt(half_ - scale_ * z.imag()); }
  std::string xy(Complex z) const { return x(z) + " " + y(z); }
  double scale() const { return scale_; }

  void open() {
    out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << style_.size << "\" height=\"" << style_.size
         << "\" viewBox=\"0 0 " << style_.size << " " << style_.size << "\">\n";
    out_ << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out_ << "<circle cx=\"" << fmt(half_) << "\" cy=\"" << fmt(half_) << "\" r=\"" << fmt(scale_)
         << "\" fill=\"none\" stroke=\"" << style_.disk_color << "\" stroke-width=\"1.0000\"/>\n";
  }
  std::string close() {
    out_ << "</svg>\n";
    return out_.str();
  }
  std::ostringstream& out() { return out_; }

  void geodesic(const Geodesic& g, double width, const std::string& color) {
    GeodesicArc a = geodesic_arc(g);
    out_ << "<path d=\"M " << xy(a.p) << " ";
    if (a.straight) {
      out_ << "L " << xy(a.q);
    } else {
      double cr = (a.p.real() - a.center.real()) * (a.q.imag() - a.center.imag()) -
                  (a.p.imag() - a.center.imag()) * (a.q.real() - a.center.real());
      out_ << "A " << fmt(scale_ * a.radius) << " " << fmt(scale_ * a.radius) << " 0 0 " << (cr > 0 ? 1 : 0) << " "
           << xy(a.q);
    }
    out_ << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << fmt(width) << "\"/>\n";
  }

  // Counterclockwise boundary arc from angle `from` of length `len`.
  void boundary_arc(double from, double len, double width, const std::string& color) {
    Complex p = std::polar(1.0, from), q = std::polar(1.0, from + len);
    out_ << "<path d=\"M " << xy(p) << " A " << fmt(scale_) << " " << fmt(scale_) << " 0 " << (len > kPi ? 1 : 0)
         << " 0 " << xy(q) << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << fmt(width)
         << "\"/>\n";
  }

  void segment(Complex p, Complex q, double width, const std::string& color) {
    out_ << "<line x1=\"" << x(p) << "\" y1=\"" << y(p) << "\" x2=\"" << x(q) << "\" y2=\"" << y(q)
         << "\" stroke=\"" << color << "\" stroke-width=\"" << fmt(width) << "\"/>\n";
  }

 private:
  const SvgStyle& style_;
  double half_ = 0.0, scale_ = 0.0;
  std::ostringstream out_;
};

}  // namespace

GeodesicArc geodesic_arc(const Geodesic& g) {
  double alpha = g.a().angle(), beta = g.b().angle();
  GeodesicArc arc;
  arc.p = std::polar(1.0, alpha);
  arc.q = std::polar(1.0, beta);
  double half = 0.5 * (beta - alpha);
  double c = std::cos(half);
  if (std::abs(c) < 1e-9) {
    arc.straight = true;
    return arc;
  }
  arc.center = std::polar(1.0 / c, 0.5 * (alpha + beta));
  arc.radius = std::abs(std::tan(half));
  return arc;
}

std::vector<Complex> sample_arc(const GeodesicArc& arc, int samples) {
  samples = std::max(samples, 2);
  std::vector<Complex> pts;
  if (arc.straight) {
    for (int k = 0; k < samples; ++k) {
      double s = static_cast<double>(k) / (samples - 1);
      pts.push_back((1.0 - s) * arc.p + s * arc.q);
    }
    return pts;
  }
  double phi_p = std::arg(arc.p - arc.center);
  double sweep = std::remainder(std::arg(arc.q - arc.center) - phi_p, kTwoPi);  // short way round
  for (int k = 0; k < samples; ++k) {
    double s = static_cast<double>(k) / (samples - 1);
    pts.push_back(arc.center + std::polar(arc.radius, phi_p + s * sweep));
  }
  return pts;
}

bool arc_inside_disk(const Geodesic& g, int samples) {
  for (Complex z : sample_arc(geodesic_arc(g), samples))
    if (std::abs(z) > 1.0 + 1e-9) return false;
  return true;
}

std::string plot_lamination(const LaminationOracle& lambda, const std::vector<GeodesicBox>& boxes,
                            const SvgStyle& style) {
  Canvas cv(style);
  cv.open();
  auto width = [&](double w) { return std::clamp(style.stroke_per_weight * w, style.min_stroke, style.max_stroke); };
  if (const DiscreteLamination* d = lambda.as_discrete()) {
    for (const auto& [g, w] : d->leaves()) cv.geodesic(g, width(w), style.leaf_color);
  } else {
    for (const Geodesic& g : lambda.sample_leaves(style.band_samples)) cv.geodesic(g, style.min_stroke, style.leaf_color);
  }
  for (const GeodesicBox& q : boxes) {
    cv.boundary_arc(q.a().angle(), q.first_arc_length(), 4.0, style.box_color);
    cv.boundary_arc(q.c().angle(), q.second_arc_length(), 4.0, style.box_color);
  }
  return cv.close();
}

std::string plot_earthquake_image(const CircleMap& h, const LaminationOracle* lambda, const SvgStyle& style) {
  Canvas cv(style);
  cv.open();
  if (lambda) {
    if (const DiscreteLamination* d = lambda->as_discrete()) {
      for (const auto& [g, w] : d->leaves()) cv.geodesic(g, style.min_stroke, "#9aa7b1");
    } else {
      for (const Geodesic& g : lambda->sample_leaves(style.band_samples)) cv.geodesic(g, style.min_stroke, "#9aa7b1");
    }
  }
  for (int k = 0; k < style.ticks; ++k) {
    double theta = kTwoPi * k / style.ticks;
    double image = h(BoundaryPoint::disk(theta)).angle();
    cv.segment(std::polar(1.06, theta), std::polar(0.94, image), 0.6, style.leaf_color);
  }
  return cv.close();
}

std::string plot_vector_field(const CircleVectorField& v, const SvgStyle& style) {
  Canvas cv(style);
  cv.open();
  std::vector<double> vals(style.ticks);
  double peak = 0.0;
  for (int k = 0; k < style.ticks; ++k) {
    vals[k] = v.angular_value(kTwoPi * k / style.ticks);
    if (std::isfinite(vals[k])) peak = std::max(peak, std::abs(vals[k]));
  }
  for (int k = 0; k < style.ticks; ++k) {
    if (!std::isfinite(vals[k]) || peak == 0.0) continue;
    double theta = kTwoPi * k / style.ticks;
    double len = 0.15 * vals[k] / peak;  // outward for counterclockwise motion
    cv.segment(std::polar(1.0, theta), std::polar(1.0 + len, theta), 1.0,
               vals[k] >= 0 ? style.leaf_color : style.box_color);
  }
  return cv.close();
}

}  // namespace eql
