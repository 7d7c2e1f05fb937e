#include "speclab/fem.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "parallel.hpp"

namespace speclab {

namespace {

using EdgeKey = std::pair<int, int>;
EdgeKey key(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

constexpr int kChunk = 512;

}  // namespace

FeSpace make_space(const Mesh& mesh, int order) {
  if (order != 1 && order != 2) throw ConfigError("make_space: order must be 1 or 2");
  FeSpace s;
  s.mesh = &mesh;
  s.order = order;
  const int nv = mesh.vertex_count();
  s.dof_coords.assign(mesh.vertices.begin(), mesh.vertices.end());
  s.dof_on_boundary.assign(nv, false);
  for (int v = 0; v < nv; ++v) {
    s.dof_on_boundary[v] = mesh.vertex_markers[v] == VertexMarker::Boundary;
  }

  std::map<EdgeKey, int> edge_dof;
  s.cell_dofs.resize(mesh.triangle_count());
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles[t];
    auto& cd = s.cell_dofs[t];
    cd = {tri[0], tri[1], tri[2], -1, -1, -1};
    if (order == 2) {
      const int pairs[3][2] = {{0, 1}, {1, 2}, {2, 0}};
      for (int e = 0; e < 3; ++e) {
        const int a = tri[pairs[e][0]], b = tri[pairs[e][1]];
        auto [it, inserted] = edge_dof.try_emplace(key(a, b), nv + static_cast<int>(edge_dof.size()));
        if (inserted) {
          s.dof_coords.push_back(0.5 * (mesh.vertices[a] + mesh.vertices[b]));
          s.dof_on_boundary.push_back(false);
        }
        cd[3 + e] = it->second;
      }
    }
  }
  if (order == 2) {
    for (const auto& e : mesh.boundary_edges) {
      s.dof_on_boundary[edge_dof.at(key(e.a, e.b))] = true;
    }
  }
  s.dof_count = static_cast<int>(s.dof_coords.size());
  for (int i = 0; i < s.dof_count; ++i) {
    (s.dof_on_boundary[i] ? s.boundary_dofs : s.interior_dofs).push_back(i);
  }

  // Owning triangle of each boundary edge.
  std::map<EdgeKey, int> tri_of;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int e = 0; e < 3; ++e) tri_of[key(tri[e], tri[(e + 1) % 3])] = t;
  }
  for (const auto& e : mesh.boundary_edges) {
    s.bedge_triangle.push_back(tri_of.at(key(e.a, e.b)));
  }
  return s;
}

ElementMap element_map(const Mesh& mesh, int t) {
  const auto& tri = mesh.triangles[t];
  ElementMap m;
  m.v0 = mesh.vertices[tri[0]];
  m.jac.col(0) = mesh.vertices[tri[1]] - m.v0;
  m.jac.col(1) = mesh.vertices[tri[2]] - m.v0;
  const double det = m.jac(0, 0) * m.jac(1, 1) - m.jac(0, 1) * m.jac(1, 0);
  if (det <= 0) throw MeshError("element_map: non-positive triangle area");
  m.area = 0.5 * det;
  Mat2 inv;
  inv << m.jac(1, 1), -m.jac(0, 1), -m.jac(1, 0), m.jac(0, 0);
  inv /= det;
  m.jac_inv_t = inv.transpose();
  return m;
}

void shape_values(int order, const std::array<double, 3>& bary, double* values) {
  const double l0 = bary[0], l1 = bary[1], l2 = bary[2];
  if (order == 1) {
    values[0] = l0;
    values[1] = l1;
    values[2] = l2;
    return;
  }
  values[0] = l0 * (2 * l0 - 1);
  values[1] = l1 * (2 * l1 - 1);
  values[2] = l2 * (2 * l2 - 1);
  values[3] = 4 * l0 * l1;
  values[4] = 4 * l1 * l2;
  values[5] = 4 * l2 * l0;
}

void shape_ref_grads(int order, const std::array<double, 3>& bary, Vec2* grads) {
  static const Vec2 gl[3] = {Vec2(-1, -1), Vec2(1, 0), Vec2(0, 1)};
  if (order == 1) {
    grads[0] = gl[0];
    grads[1] = gl[1];
    grads[2] = gl[2];
    return;
  }
  const double l0 = bary[0], l1 = bary[1], l2 = bary[2];
  grads[0] = (4 * l0 - 1) * gl[0];
  grads[1] = (4 * l1 - 1) * gl[1];
  grads[2] = (4 * l2 - 1) * gl[2];
  grads[3] = 4 * (l1 * gl[0] + l0 * gl[1]);
  grads[4] = 4 * (l2 * gl[1] + l1 * gl[2]);
  grads[5] = 4 * (l0 * gl[2] + l2 * gl[0]);
}

namespace {

using Triplet = Eigen::Triplet<double>;

// Element-parallel assembly with fixed chunking; triplets are concatenated in
// chunk order so the result is independent of the thread count.
template <class LocalFn>
SymSparseMatrix assemble_cells(const FeSpace& space, LocalFn&& local, bool psd) {
  const int nt = space.mesh->triangle_count();
  const int nd = space.dofs_per_cell();
  const int n_chunks = (nt + kChunk - 1) / kChunk;
  std::vector<std::vector<Triplet>> parts(std::max(n_chunks, 1));
  detail::for_chunks(nt, kChunk, [&](int chunk, int begin, int end) {
    auto& out = parts[chunk];
    Eigen::MatrixXd loc(nd, nd);
    for (int t = begin; t < end; ++t) {
      loc.setZero();
      local(t, loc);
      const auto& cd = space.cell_dofs[t];
      for (int i = 0; i < nd; ++i) {
        out.emplace_back(cd[i], cd[i], loc(i, i));
        for (int j = i + 1; j < nd; ++j) {
          // mirror the single computed upper-triangle value
          out.emplace_back(cd[i], cd[j], loc(i, j));
          out.emplace_back(cd[j], cd[i], loc(i, j));
        }
      }
    }
  });
  std::vector<Triplet> all;
  std::size_t total = 0;
  for (const auto& p : parts) total += p.size();
  all.reserve(total);
  for (const auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  SymSparseMatrix out;
  out.mat.resize(space.dof_count, space.dof_count);
  out.mat.setFromTriplets(all.begin(), all.end());
  out.mat.makeCompressed();
  out.is_positive_semidefinite = psd;
  return out;
}

}  // namespace

SymSparseMatrix assemble_stiffness(const FeSpace& space, const MetricModel& metric,
                                   int quad_degree) {
  (void)metric;  // conformal invariance of the 2D Dirichlet integral
  const auto& rule = tri_rule(quad_degree);
  const auto& mesh = *space.mesh;
  const int nd = space.dofs_per_cell();
  return assemble_cells(
      space,
      [&](int t, Eigen::MatrixXd& loc) {
        const ElementMap em = element_map(mesh, t);
        Vec2 ref[6], g[6];
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
          shape_ref_grads(space.order, rule.points[q], ref);
          for (int i = 0; i < nd; ++i) g[i] = em.jac_inv_t * ref[i];
          const double w = rule.weights[q] * em.area;
          for (int i = 0; i < nd; ++i) {
            for (int j = i; j < nd; ++j) loc(i, j) += w * g[i].dot(g[j]);
          }
        }
      },
      true);
}

SymSparseMatrix assemble_mass(const FeSpace& space, const MetricModel& metric,
                              int quad_degree) {
  const auto& rule = tri_rule(quad_degree);
  const auto& mesh = *space.mesh;
  const int nd = space.dofs_per_cell();
  return assemble_cells(
      space,
      [&](int t, Eigen::MatrixXd& loc) {
        const ElementMap em = element_map(mesh, t);
        double v[6];
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
          shape_values(space.order, rule.points[q], v);
          const Vec2 x = mesh.triangle_point(t, rule.points[q]);
          const double w = rule.weights[q] * em.area * metric.area_weight(x);
          for (int i = 0; i < nd; ++i) {
            for (int j = i; j < nd; ++j) loc(i, j) += w * v[i] * v[j];
          }
        }
      },
      true);
}

namespace {

// Barycentric coordinates of chart point x in triangle t.
std::array<double, 3> barycentric(const ElementMap& em, const Vec2& x) {
  const Vec2 rhs = x - em.v0;
  const double det = 2.0 * em.area;
  const double xi = (em.jac(1, 1) * rhs.x() - em.jac(0, 1) * rhs.y()) / det;
  const double eta = (-em.jac(1, 0) * rhs.x() + em.jac(0, 0) * rhs.y()) / det;
  return {1.0 - xi - eta, xi, eta};
}

}  // namespace

SymSparseMatrix assemble_boundary_mass(const FeSpace& space, const MetricModel& metric,
                                       BoundaryWeight weight, int edge_degree) {
  const auto& rule = edge_rule(edge_degree);
  const auto& mesh = *space.mesh;
  const int nd = space.dofs_per_cell();
  std::vector<Triplet> trips;
  double v[6];
  for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
    const auto& be = mesh.boundary_edges[e];
    const int t = space.bedge_triangle[e];
    const ElementMap em = element_map(mesh, t);
    const auto& cd = space.cell_dofs[t];
    const Vec2 pa = mesh.vertices[be.a], pb = mesh.vertices[be.b];
    const double len = (pb - pa).norm();
    Eigen::MatrixXd loc = Eigen::MatrixXd::Zero(nd, nd);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Vec2 x = pa + rule.points[q] * (pb - pa);
      double w = rule.weights[q] * len * metric.length_weight(x);
      if (weight) {
        const double wx = weight(x, be.normal);
        if (wx <= 0) {
          char buf[96];
          std::snprintf(buf, sizeof(buf),
                        "boundary weight <= 0 at (%.6g, %.6g); domain not star-shaped there",
                        x.x(), x.y());
          throw NumericalError(buf);
        }
        w *= wx;
      }
      shape_values(space.order, barycentric(em, x), v);
      for (int i = 0; i < nd; ++i) {
        for (int j = i; j < nd; ++j) loc(i, j) += w * v[i] * v[j];
      }
    }
    for (int i = 0; i < nd; ++i) {
      trips.emplace_back(cd[i], cd[i], loc(i, i));
      for (int j = i + 1; j < nd; ++j) {
        trips.emplace_back(cd[i], cd[j], loc(i, j));
        trips.emplace_back(cd[j], cd[i], loc(i, j));
      }
    }
  }
  SymSparseMatrix out;
  out.mat.resize(space.dof_count, space.dof_count);
  out.mat.setFromTriplets(trips.begin(), trips.end());
  out.mat.makeCompressed();
  out.is_positive_semidefinite = true;
  return out;
}

NormalTraceOp normal_trace(const FeSpace& space, const MetricModel& metric,
                           int edge_degree) {
  const auto& rule = edge_rule(edge_degree);
  const auto& mesh = *space.mesh;
  const int nd = space.dofs_per_cell();
  NormalTraceOp op;
  std::vector<Triplet> trips;
  Vec2 ref[6];
  int row = 0;
  for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
    const auto& be = mesh.boundary_edges[e];
    const int t = space.bedge_triangle[e];
    const ElementMap em = element_map(mesh, t);
    const auto& cd = space.cell_dofs[t];
    const Vec2 pa = mesh.vertices[be.a], pb = mesh.vertices[be.b];
    const double len = (pb - pa).norm();
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Vec2 x = pa + rule.points[q] * (pb - pa);
      const double c = metric.conformal_factor(x);
      shape_ref_grads(space.order, barycentric(em, x), ref);
      for (int i = 0; i < nd; ++i) {
        const Vec2 g = em.jac_inv_t * ref[i];
        // d_nu phi = (chart grad . chart normal) / c in a conformal metric
        trips.emplace_back(row, cd[i], g.dot(be.normal) / c);
      }
      op.weights.push_back(rule.weights[q] * len * metric.length_weight(x));
      op.points.push_back(x);
      op.edge_index.push_back(static_cast<int>(e));
      ++row;
    }
  }
  op.samples.resize(row, space.dof_count);
  op.samples.setFromTriplets(trips.begin(), trips.end());
  op.samples.makeCompressed();
  return op;
}

SymSparseMatrix NormalTraceOp::gram() const {
  Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(weights.data(), weights.size());
  SymSparseMatrix out;
  SpMat weighted = w.asDiagonal() * samples;
  out.mat = SpMat(samples.transpose() * weighted);
  // exact symmetrization (the triple product is symmetric only up to roundoff)
  out.mat = SpMat(0.5 * (out.mat + SpMat(out.mat.transpose())));
  out.mat.makeCompressed();
  out.is_positive_semidefinite = true;
  return out;
}

Eigen::VectorXd normal_derivative(const FeSpace& space, const MetricModel& metric,
                                  const Eigen::VectorXd& u, int edge_degree) {
  return normal_trace(space, metric, edge_degree).samples * u;
}

double fem_value(const FeSpace& space, const Eigen::VectorXd& u, int tri,
                 const std::array<double, 3>& bary) {
  double v[6];
  shape_values(space.order, bary, v);
  const auto& cd = space.cell_dofs[tri];
  double sum = 0;
  for (int i = 0; i < space.dofs_per_cell(); ++i) sum += v[i] * u[cd[i]];
  return sum;
}

Vec2 fem_grad_chart(const FeSpace& space, const Eigen::VectorXd& u, int tri,
                    const std::array<double, 3>& bary) {
  Vec2 ref[6];
  shape_ref_grads(space.order, bary, ref);
  const ElementMap em = element_map(*space.mesh, tri);
  const auto& cd = space.cell_dofs[tri];
  Vec2 g = Vec2::Zero();
  for (int i = 0; i < space.dofs_per_cell(); ++i) g += u[cd[i]] * (em.jac_inv_t * ref[i]);
  return g;
}

SpMat restrict_matrix(const SpMat& a, const std::vector<int>& rows,
                      const std::vector<int>& cols) {
  std::vector<int> row_map(a.rows(), -1), col_map(a.cols(), -1);
  for (std::size_t i = 0; i < rows.size(); ++i) row_map[rows[i]] = static_cast<int>(i);
  for (std::size_t j = 0; j < cols.size(); ++j) col_map[cols[j]] = static_cast<int>(j);
  std::vector<Triplet> trips;
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SpMat::InnerIterator it(a, k); it; ++it) {
      const int r = row_map[it.row()], c = col_map[it.col()];
      if (r >= 0 && c >= 0) trips.emplace_back(r, c, it.value());
    }
  }
  SpMat out(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
  out.setFromTriplets(trips.begin(), trips.end());
  out.makeCompressed();
  return out;
}

}  // namespace speclab
