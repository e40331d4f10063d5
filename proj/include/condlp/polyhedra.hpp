#pragma once

#include <vector>

#include "condlp/numerics.hpp"

namespace condlp {

// {p : G p >= 0} = cone(rays) + span(lineality), rays and lineality unit-norm.
struct ConeGenerators {
  std::vector<Vector> rays;
  std::vector<Vector> lineality;
};

// Double description method. Adjacency uses the algebraic rank test.
ConeGenerators cone_generators(const Matrix& G, double tol = 1e-10);

// {w : B w <= d}, rows of B have unit norm.
struct HRep {
  Matrix B;
  Vector d;
};

constexpr Index kMaxFacetDimension = 4;

// Facets of ray(ray_dir) - hull(points).
HRep facet_enumeration(const Vector& ray_dir, const std::vector<Vector>& points);

double inside_distance(const Vector& z, const HRep& h, double tol = 1e-9);

}  // namespace condlp
