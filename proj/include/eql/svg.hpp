#pragma once

#include <string>
#include <vector>

#include "eql/norms.hpp"

namespace eql {

struct SvgStyle {
  int size = 600;
  double margin = 0.08;  // fraction of the size left around the disk
  double stroke_per_weight = 3.0;
  double min_stroke = 0.4;
  double max_stroke = 8.0;
  std::size_t band_samples = 64;  // leaves drawn for non-discrete laminations
  int ticks = 120;                // boundary samples for maps and fields
  std::string leaf_color = "#1f4e79";
  std::string box_color = "#c0392b";
  std::string disk_color = "#222222";
};

// Orthogonal circle through the endpoints of g in the unit disk, or a
// diameter when the endpoints are antipodal.
struct GeodesicArc {
  Complex p, q;  // endpoints on the unit circle
  bool straight = false;
  Complex center;
  double radius = 0.0;
};
GeodesicArc geodesic_arc(const Geodesic& g);
// Points of the drawn arc from p to q, endpoints included.
std::vector<Complex> sample_arc(const GeodesicArc& arc, int samples);
// Every sampled point of the drawn arc lies in the closed unit disk.
bool arc_inside_disk(const Geodesic& g, int samples = 65);

// Leaves with weight-scaled strokes; boxes drawn as their two boundary arcs.
std::string plot_lamination(const LaminationOracle& lambda, const std::vector<GeodesicBox>& boxes = {},
                            const SvgStyle& style = {});
// Ticks joining theta on an outer ring to h(theta) on an inner ring.
std::string plot_earthquake_image(const CircleMap& h, const LaminationOracle* lambda = nullptr,
                                  const SvgStyle& style = {});
// Radial spikes proportional to the angular coefficient of v.
std::string plot_vector_field(const CircleVectorField& v, const SvgStyle& style = {});

}  // namespace eql
