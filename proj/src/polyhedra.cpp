#include "condlp/polyhedra.hpp"

#include <algorithm>
#include <cmath>

namespace condlp {

namespace {

Index rank_of(const std::vector<Index>& rows, const Matrix& G, double tol) {
  if (rows.empty()) return 0;
  Matrix S(static_cast<Index>(rows.size()), G.cols());
  for (size_t i = 0; i < rows.size(); ++i) S.row(static_cast<Index>(i)) = G.row(rows[i]);
  Eigen::FullPivLU<Matrix> lu(S);
  lu.setThreshold(std::max(tol, 1e-12) * 10.0);
  return lu.rank();
}

}  // namespace

ConeGenerators cone_generators(const Matrix& G_in, double tol) {
  const Index k = G_in.cols();
  Matrix G = G_in;
  std::vector<Index> active;  // nonzero rows, normalized
  for (Index i = 0; i < G.rows(); ++i) {
    const double n = G.row(i).norm();
    if (n > 0.0) {
      G.row(i) /= n;
      active.push_back(i);
    }
  }
  std::vector<Vector> lin;
  for (Index j = 0; j < k; ++j) lin.push_back(Vector::Unit(k, j));
  std::vector<Vector> rays;
  std::vector<Index> done;

  for (Index gi : active) {
    const Vector g = G.row(gi).transpose();
    // a lineality vector not orthogonal to g splits off one new ray
    Index best = -1;
    double bestv = tol;
    for (size_t l = 0; l < lin.size(); ++l) {
      const double v = std::abs(g.dot(lin[l]));
      if (v > bestv) {
        bestv = v;
        best = static_cast<Index>(l);
      }
    }
    if (best >= 0) {
      Vector ls = lin[static_cast<size_t>(best)];
      if (g.dot(ls) < 0) ls = -ls;
      const double gl = g.dot(ls);
      std::vector<Vector> nl;
      for (size_t l = 0; l < lin.size(); ++l) {
        if (static_cast<Index>(l) == best) continue;
        Vector v = lin[l] - (g.dot(lin[l]) / gl) * ls;
        // re-orthonormalize against the kept basis
        for (const Vector& u : nl) v -= u.dot(v) * u;
        const double nv = v.norm();
        if (nv > tol) nl.push_back(v / nv);
      }
      // ls must be orthogonal to the remaining lineality (g^T ls is unchanged by this)
      for (const Vector& u : nl) ls -= u.dot(ls) * u;
      const double gls = g.dot(ls);
      for (Vector& r : rays) {
        r -= (g.dot(r) / gls) * ls;
        for (const Vector& u : nl) r -= u.dot(r) * u;
        r /= r.norm();
      }
      rays.push_back(ls / ls.norm());
      lin = std::move(nl);
      done.push_back(gi);
      continue;
    }
    std::vector<Vector> pos, neg, next;
    std::vector<double> spos, sneg;
    for (const Vector& r : rays) {
      const double s = g.dot(r);
      if (s > tol) {
        pos.push_back(r);
        spos.push_back(s);
        next.push_back(r);
      } else if (s < -tol) {
        neg.push_back(r);
        sneg.push_back(s);
      } else {
        next.push_back(r);
      }
    }
    const Index pointed_dim = k - static_cast<Index>(lin.size());
    auto zero_set = [&](const Vector& r) {
      std::vector<Index> z;
      for (Index h : done)
        if (std::abs(G.row(h).dot(r)) <= tol * 10.0) z.push_back(h);
      return z;
    };
    std::vector<std::vector<Index>> zpos, zneg;
    for (const Vector& r : pos) zpos.push_back(zero_set(r));
    for (const Vector& r : neg) zneg.push_back(zero_set(r));
    for (size_t a = 0; a < pos.size(); ++a) {
      for (size_t b = 0; b < neg.size(); ++b) {
        std::vector<Index> common;
        std::set_intersection(zpos[a].begin(), zpos[a].end(), zneg[b].begin(), zneg[b].end(),
                              std::back_inserter(common));
        if (static_cast<Index>(common.size()) < pointed_dim - 2) continue;
        if (rank_of(common, G, tol) != pointed_dim - 2) continue;
        Vector r = spos[a] * neg[b] - sneg[b] * pos[a];
        const double nr = r.norm();
        if (nr <= tol) continue;
        next.push_back(r / nr);
      }
    }
    // drop duplicates
    std::vector<Vector> uniq;
    for (const Vector& r : next) {
      bool dup = false;
      for (const Vector& u : uniq)
        if ((u - r).norm() <= 1e-9) {
          dup = true;
          break;
        }
      if (!dup) uniq.push_back(r);
    }
    rays = std::move(uniq);
    done.push_back(gi);
    std::sort(done.begin(), done.end());
  }
  ConeGenerators out;
  out.rays = std::move(rays);
  out.lineality = std::move(lin);
  return out;
}

HRep facet_enumeration(const Vector& ray_dir, const std::vector<Vector>& points) {
  const Index d = ray_dir.size();
  if (d > kMaxFacetDimension) throw DimensionTooLarge("facet enumeration is limited to dimension 4");
  if (points.empty()) throw InvalidInput("facet enumeration needs at least one point");
  if (ray_dir.norm() == 0.0) throw InvalidInput("ray direction must be nonzero");
  // cone over the polyhedron: generators (-x_i, 1) and (c, 0); its polar is {y : Gen y <= 0}
  Matrix Gen(static_cast<Index>(points.size()) + 1, d + 1);
  for (size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != d) throw InvalidInput("point has wrong dimension");
    Gen.row(static_cast<Index>(i)).head(d) = -points[i].transpose();
    Gen(static_cast<Index>(i), d) = 1.0;
  }
  Gen.row(Gen.rows() - 1).head(d) = ray_dir.transpose();
  Gen(Gen.rows() - 1, d) = 0.0;
  const ConeGenerators polar = cone_generators(-Gen);
  std::vector<Vector> normals;
  for (const Vector& r : polar.rays) normals.push_back(r);
  for (const Vector& l : polar.lineality) {
    normals.push_back(l);
    normals.push_back(-l);
  }
  std::vector<Vector> Bs;
  std::vector<double> ds;
  for (const Vector& y : normals) {
    const Vector bw = y.head(d);
    const double nb = bw.norm();
    if (nb <= 1e-9) continue;
    Bs.push_back(bw / nb);
    ds.push_back(-y(d) / nb);
  }
  HRep h;
  h.B.resize(static_cast<Index>(Bs.size()), d);
  h.d.resize(static_cast<Index>(Bs.size()));
  for (size_t i = 0; i < Bs.size(); ++i) {
    h.B.row(static_cast<Index>(i)) = Bs[i].transpose();
    h.d(static_cast<Index>(i)) = ds[i];
  }
  return h;
}

double inside_distance(const Vector& z, const HRep& h, double tol) {
  if (z.size() != h.B.cols()) throw InvalidInput("point has wrong dimension");
  double best = std::numeric_limits<double>::infinity();
  for (Index j = 0; j < h.B.rows(); ++j) {
    const double slack = (h.d(j) - h.B.row(j).dot(z)) / h.B.row(j).norm();
    if (slack < -tol) throw InvalidInput("inside_distance: point lies outside the polyhedron");
    best = std::min(best, slack);
  }
  return std::max(best, 0.0);
}

}  // namespace condlp
