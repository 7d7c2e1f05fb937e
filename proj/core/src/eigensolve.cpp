#include "speclab/eigensolve.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

namespace speclab {

namespace {

using Triplet = Eigen::Triplet<double>;
using Eigen::MatrixXd;
using Eigen::VectorXd;

double mean_abs_nonzero_diag(const SpMat& m) {
  double sum = 0;
  int count = 0;
  for (int i = 0; i < std::min(m.rows(), m.cols()); ++i) {
    const double d = m.coeff(i, i);
    if (d != 0.0) {
      sum += std::abs(d);
      ++count;
    }
  }
  return count ? sum / count : 1.0;
}

int count_zero_diag(const SpMat& m) {
  int z = 0;
  for (int i = 0; i < m.rows(); ++i) {
    if (m.coeff(i, i) == 0.0) ++z;
  }
  return z;
}

// Characteristic theta scale of the pencil, used to place the negative shift.
double pencil_scale(const SpectralPencil& p) {
  double a_scale;
  if (p.product) {
    // A = G^T Mz^{-1} G: diag(A)_i ~ |G col i|^2 / diag(Mz)
    const double g2 = p.G.squaredNorm() / std::max<int>(1, p.G.cols());
    a_scale = g2 / mean_abs_nonzero_diag(p.Mz);
  } else {
    a_scale = mean_abs_nonzero_diag(p.A);
  }
  return a_scale / mean_abs_nonzero_diag(p.B);
}

// Full-row-rank subset of constraint rows, found by pivoted QR on the Gram
// matrix of the normalized rows.
SpMat reduce_constraints(const SpMat& c) {
  if (c.rows() == 0) return c;
  SpMat cn = c;
  std::vector<double> norms(cn.rows(), 0.0);
  for (int k = 0; k < cn.outerSize(); ++k) {
    for (SpMat::InnerIterator it(cn, k); it; ++it) norms[it.row()] += it.value() * it.value();
  }
  for (int k = 0; k < cn.outerSize(); ++k) {
    for (SpMat::InnerIterator it(cn, k); it; ++it) {
      if (norms[it.row()] > 0) it.valueRef() /= std::sqrt(norms[it.row()]);
    }
  }
  MatrixXd gram = MatrixXd(cn * SpMat(cn.transpose()));
  Eigen::ColPivHouseholderQR<MatrixXd> qr(gram);
  qr.setThreshold(1e-10);
  const int rank = static_cast<int>(qr.rank());
  if (rank == cn.rows()) return cn;
  std::vector<int> keep(qr.colsPermutation().indices().data(),
                        qr.colsPermutation().indices().data() + rank);
  std::sort(keep.begin(), keep.end());
  std::vector<Triplet> trips;
  std::vector<int> row_map(cn.rows(), -1);
  for (int i = 0; i < rank; ++i) row_map[keep[i]] = i;
  for (int k = 0; k < cn.outerSize(); ++k) {
    for (SpMat::InnerIterator it(cn, k); it; ++it) {
      if (row_map[it.row()] >= 0) trips.emplace_back(row_map[it.row()], it.col(), it.value());
    }
  }
  SpMat out(rank, cn.cols());
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

void append_block(std::vector<Triplet>& trips, const SpMat& m, int row0, int col0,
                  bool transpose = false, double scale = 1.0) {
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SpMat::InnerIterator it(m, k); it; ++it) {
      if (transpose) {
        trips.emplace_back(col0 + static_cast<int>(it.col()), row0 + static_cast<int>(it.row()),
                           scale * it.value());
      } else {
        trips.emplace_back(row0 + static_cast<int>(it.row()), col0 + static_cast<int>(it.col()),
                           scale * it.value());
      }
    }
  }
}

// Shift-invert operator y = (A - sigma B)^{-1} B x on ker C, realized through
// a sparse factorization of the (possibly expanded, possibly KKT-augmented)
// system. Also provides A*x for residual checks.
class ShiftInvertOp {
 public:
  ShiftInvertOp(const SpectralPencil& p, const SpMat& c_red, double sigma)
      : p_(p), nc_(static_cast<int>(c_red.rows())), n_(p.dim()) {
    std::vector<Triplet> trips;
    if (!p.product) {
      if (nc_ == 0) {
        SpMat s = p.A - sigma * p.B;
        ldlt_ = std::make_unique<Eigen::SimplicialLDLT<SpMat>>();
        ldlt_->compute(s);
        if (ldlt_->info() != Eigen::Success) {
          // fall back to LU for indefinite shifted systems
          ldlt_.reset();
          lu_ = std::make_unique<Eigen::SparseLU<SpMat>>();
          lu_->compute(s);
          if (lu_->info() != Eigen::Success) throw NumericalError("shift factorization failed");
        }
        size_ = n_;
        u_offset_ = 0;
      } else {
        SpMat s = p.A - sigma * p.B;
        append_block(trips, s, 0, 0);
        append_block(trips, c_red, n_, 0);
        append_block(trips, c_red, n_, 0, /*transpose=*/true);
        size_ = n_ + nc_;
        u_offset_ = 0;
        build_lu(trips);
      }
    } else {
      const int nz = static_cast<int>(p.Mz.rows());
      append_block(trips, p.Mz, 0, 0, false, -1.0);
      append_block(trips, p.G, 0, nz);
      append_block(trips, p.G, 0, nz, /*transpose=*/true);
      append_block(trips, p.B, nz, nz, false, -sigma);
      if (nc_ > 0) {
        append_block(trips, c_red, nz + n_, nz);
        append_block(trips, c_red, nz + n_, nz, /*transpose=*/true);
      }
      size_ = nz + n_ + nc_;
      u_offset_ = nz;
      build_lu(trips);
      mz_ldlt_.compute(p.Mz);
      if (mz_ldlt_.info() != Eigen::Success) throw NumericalError("Mz factorization failed");
    }
  }

  VectorXd apply(const VectorXd& x) const {
    const VectorXd bx = p_.B * x;
    if (ldlt_) return ldlt_->solve(bx);
    VectorXd rhs = VectorXd::Zero(size_);
    rhs.segment(u_offset_, n_) = bx;
    const VectorXd sol = lu_->solve(rhs);
    return sol.segment(u_offset_, n_);
  }

  VectorXd apply_A(const VectorXd& x) const {
    if (!p_.product) return p_.A * x;
    return SpMat(p_.G.transpose()) * mz_ldlt_.solve(p_.G * x);
  }

 private:
  void build_lu(std::vector<Triplet>& trips) {
    SpMat s(size_, size_);
    s.setFromTriplets(trips.begin(), trips.end());
    s.makeCompressed();
    lu_ = std::make_unique<Eigen::SparseLU<SpMat>>();
    lu_->compute(s);
    if (lu_->info() != Eigen::Success) throw NumericalError("expanded shift factorization failed");
  }

  const SpectralPencil& p_;
  int nc_ = 0, n_ = 0, size_ = 0, u_offset_ = 0;
  std::unique_ptr<Eigen::SimplicialLDLT<SpMat>> ldlt_;
  std::unique_ptr<Eigen::SparseLU<SpMat>> lu_;
  Eigen::SimplicialLDLT<SpMat> mz_ldlt_;
};

struct RawPairs {
  std::vector<double> values;
  MatrixXd vectors;
  int infinite_directions = 0;
};

// ----- dense reference path ------------------------------------------------

MatrixXd dense_A(const SpectralPencil& p) {
  if (!p.product) return MatrixXd(p.A);
  MatrixXd g = MatrixXd(p.G);
  Eigen::LDLT<MatrixXd> mz(MatrixXd(p.Mz));
  if (mz.info() != Eigen::Success) throw NumericalError("dense Mz factorization failed");
  return g.transpose() * mz.solve(g);
}

MatrixXd dense_null_basis(const SpMat& c, int n) {
  if (c.rows() == 0) return MatrixXd::Identity(n, n);
  MatrixXd ct = MatrixXd(c).transpose();  // n x m
  Eigen::ColPivHouseholderQR<MatrixXd> qr(ct);
  qr.setThreshold(1e-10);
  const int rank = static_cast<int>(qr.rank());
  MatrixXd q = qr.householderQ();
  return q.rightCols(n - rank);
}

RawPairs dense_pairs(const SpectralPencil& p, const SolverOptions& opts) {
  const int n = p.dim();
  MatrixXd a = dense_A(p);
  MatrixXd b = MatrixXd(p.B);
  MatrixXd z = dense_null_basis(p.C, n);
  if (z.cols() == 0) throw NumericalError("constraints eliminate the whole space");
  MatrixXd ar = z.transpose() * a * z;
  MatrixXd br = z.transpose() * b * z;
  ar = 0.5 * (ar + ar.transpose()).eval();
  br = 0.5 * (br + br.transpose()).eval();
  const int m = static_cast<int>(ar.rows());

  RawPairs out;
  Eigen::LLT<MatrixXd> bllt(br);
  if (bllt.info() == Eigen::Success && br.diagonal().minCoeff() > 0) {
    Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> ges(ar, br);
    if (ges.info() != Eigen::Success) throw NumericalError("dense generalized eigensolver failed");
    out.values.assign(ges.eigenvalues().data(), ges.eigenvalues().data() + m);
    out.vectors = z * ges.eigenvectors();
    out.infinite_directions = 0;
    return out;
  }

  // B is singular on the subspace: split ker B off and solve the exact Schur
  // reduction on range(B); quotients over ker B are infinite by definition.
  Eigen::SelfAdjointEigenSolver<MatrixXd> bes(br);
  const VectorXd beta = bes.eigenvalues();
  const double bmax = std::max(beta.cwiseAbs().maxCoeff(), 1e-300);
  int kernel = 0;
  while (kernel < m && beta(kernel) <= 1e-12 * bmax) ++kernel;
  const int r = m - kernel;
  out.infinite_directions = kernel;
  if (r == 0) return out;
  MatrixXd v0 = bes.eigenvectors().leftCols(kernel);
  MatrixXd vr = bes.eigenvectors().rightCols(r);
  MatrixXd a00 = v0.transpose() * ar * v0;
  MatrixXd a0r = v0.transpose() * ar * vr;
  MatrixXd arr = vr.transpose() * ar * vr;
  MatrixXd schur = arr;
  MatrixXd lift = MatrixXd::Zero(kernel, r);
  if (kernel > 0) {
    Eigen::LDLT<MatrixXd> a00f(a00);
    if (a00f.info() != Eigen::Success) {
      throw NumericalError("pencil is degenerate: A singular on ker B");
    }
    lift = -a00f.solve(a0r);
    schur = arr + a0r.transpose() * lift;
    schur = 0.5 * (schur + schur.transpose()).eval();
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> ges(schur, MatrixXd(beta.tail(r).asDiagonal()));
  if (ges.info() != Eigen::Success) throw NumericalError("dense Schur eigensolver failed");
  out.values.assign(ges.eigenvalues().data(), ges.eigenvalues().data() + r);
  MatrixXd xr = ges.eigenvectors();
  MatrixXd x = vr * xr;
  if (kernel > 0) x += v0 * (lift * xr);
  out.vectors = z * x;
  (void)opts;
  return out;
}

// ----- sparse Lanczos path --------------------------------------------------

RawPairs lanczos_pairs(const SpectralPencil& p, const SpMat& c_red, const SolverOptions& opts) {
  const int n = p.dim();
  const double sigma = -opts.sigma_rel * std::max(pencil_scale(p), 1e-300);
  ShiftInvertOp op(p, c_red, sigma);

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto random_vec = [&]() {
    VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = gauss(rng);
    return v;
  };

  const int n_wanted = opts.k;
  const int n_buffer = n_wanted + std::max(6, n_wanted / 2);
  const int m_max = std::min(n, std::max(opts.max_subspace, 3 * n_buffer + 20));

  std::vector<VectorXd> v_basis, bv_basis;
  std::vector<double> alpha, beta;

  // Start in the B-visible subspace.
  VectorXd v;
  double vnorm = 0;
  for (int attempt = 0; attempt < 5; ++attempt) {
    v = op.apply(random_vec());
    VectorXd bv = p.B * v;
    vnorm = std::sqrt(std::max(v.dot(bv), 0.0));
    if (vnorm > 1e-200) {
      v /= vnorm;
      break;
    }
  }
  if (vnorm <= 1e-200) throw NumericalError("Lanczos: cannot find a B-nonzero start vector");
  v_basis.push_back(v);
  bv_basis.push_back(p.B * v);

  auto reorthogonalize = [&](VectorXd& w) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < v_basis.size(); ++i) {
        const double h = bv_basis[i].dot(w);
        w -= h * v_basis[i];
      }
    }
  };

  struct Ritz {
    double zeta;
    double bound;
    VectorXd coeffs;
  };
  std::vector<Ritz> wanted;

  // Ritz extraction from the tridiagonal matrix: the largest positive zeta
  // correspond to the smallest finite theta.
  auto extract = [&](int m) {
    MatrixXd t = MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      t(i, i) = alpha[i];
      if (i + 1 < m) {
        t(i, i + 1) = beta[i];
        t(i + 1, i) = beta[i];
      }
    }
    Eigen::SelfAdjointEigenSolver<MatrixXd> tes(t);
    wanted.clear();
    for (int idx = m - 1; idx >= 0 && static_cast<int>(wanted.size()) < n_buffer; --idx) {
      const double zeta = tes.eigenvalues()(idx);
      if (zeta <= 0) break;
      Ritz r;
      r.zeta = zeta;
      r.coeffs = tes.eigenvectors().col(idx);
      r.bound = std::abs(beta[m - 1] * r.coeffs(m - 1));
      wanted.push_back(std::move(r));
    }
  };

  int m = 0;
  bool converged = false;
  bool exhausted = false;
  while (m < m_max && !converged) {
    VectorXd w = op.apply(v_basis[m]);
    const double a = bv_basis[m].dot(w);
    const double w_scale = std::sqrt(std::max(w.dot(p.B * w), 0.0));
    alpha.push_back(a);
    w -= a * v_basis[m];
    if (m > 0) w -= beta[m - 1] * v_basis[m - 1];
    reorthogonalize(w);
    VectorXd bw = p.B * w;
    double b = std::sqrt(std::max(w.dot(bw), 0.0));
    if (b <= 1e-12 * std::max(w_scale, 1e-290)) {
      // Invariant subspace (or the finite spectrum is exhausted): restart
      // against the current basis with a fresh random direction. A remainder
      // at roundoff level means there is no new B-visible direction left.
      VectorXd r = op.apply(random_vec());
      VectorXd br = p.B * r;
      const double before = std::sqrt(std::max(r.dot(br), 0.0));
      reorthogonalize(r);
      br = p.B * r;
      const double rn = std::sqrt(std::max(r.dot(br), 0.0));
      if (rn <= 1e-8 * std::max(before, 1e-290)) {
        beta.push_back(0.0);
        ++m;
        exhausted = true;
        break;  // nothing left to find
      }
      w = r / rn;
      bw = p.B * w;
      b = 0.0;  // decouple the blocks
    } else {
      w /= b;
      bw /= b;
    }
    beta.push_back(b);
    v_basis.push_back(w);
    bv_basis.push_back(bw);
    ++m;

    if (m < std::min(2 * n_wanted + 2, m_max) && m < n) continue;
    extract(m);
    if (wanted.empty()) continue;
    converged = true;
    const int need = std::min<int>(n_wanted, static_cast<int>(wanted.size()));
    for (int i = 0; i < need; ++i) {
      if (wanted[i].bound > 0.01 * opts.tol * wanted[i].zeta) {
        converged = false;
        break;
      }
    }
  }
  if (exhausted) {
    // The finite spectrum is fully contained in the accumulated basis; its
    // Ritz values are exact up to roundoff.
    extract(m);
  } else if (!converged && m >= m_max) {
    throw NumericalError("Lanczos did not converge within the subspace limit");
  }

  RawPairs out;
  const int got = static_cast<int>(wanted.size());
  out.vectors.resize(n, got);
  for (int i = 0; i < got; ++i) {
    VectorXd x = VectorXd::Zero(n);
    for (int j = 0; j < m; ++j) x += wanted[i].coeffs(j) * v_basis[j];
    out.vectors.col(i) = x;
    out.values.push_back(sigma + 1.0 / wanted[i].zeta);
  }
  out.infinite_directions = count_zero_diag(p.B);  // structural estimate
  return out;
}

}  // namespace

std::vector<Cluster> cluster_values(const std::vector<double>& values, double cluster_tol) {
  std::vector<Cluster> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!out.empty()) {
      const double gap = values[i] - values[i - 1];
      if (gap <= cluster_tol * std::max(1.0, std::abs(values[i]))) {
        auto& c = out.back();
        c.value = (c.value * c.count + values[i]) / (c.count + 1);
        ++c.count;
        continue;
      }
    }
    out.push_back(Cluster{static_cast<int>(i), 1, values[i]});
  }
  return out;
}

int multiplicity_at(const std::vector<Cluster>& clusters, int k_one_based) {
  const int idx = k_one_based - 1;
  for (const auto& c : clusters) {
    if (idx >= c.first && idx < c.first + c.count) return c.count;
  }
  return 1;
}

EigenResult solve_smallest(const SpectralPencil& pencil, const SolverOptions& opts) {
  if (opts.k < 1) throw ConfigError("solve_smallest: k must be >= 1");
  const int n = pencil.dim();
  const SpMat c_red = reduce_constraints(pencil.C);

  const bool use_dense = opts.path == SolverOptions::Path::Dense ||
                         (opts.path == SolverOptions::Path::Auto && n <= opts.dense_threshold);
  RawPairs raw = use_dense ? dense_pairs(pencil, opts) : lanczos_pairs(pencil, c_red, opts);

  // Sort ascending, keep k, enforce B-orthonormality, compute residuals.
  std::vector<int> order(raw.values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return raw.values[a] < raw.values[b]; });
  const int keep = std::min<int>(opts.k, static_cast<int>(order.size()));

  EigenResult res;
  res.infinite_directions = raw.infinite_directions;
  res.vectors.resize(n, keep);
  std::vector<VectorXd> bcols;
  for (int i = 0; i < keep; ++i) {
    VectorXd x = raw.vectors.col(order[i]);
    VectorXd bx = pencil.B * x;
    for (int j = 0; j < static_cast<int>(bcols.size()); ++j) {
      const double h = bcols[j].dot(x);
      x -= h * res.vectors.col(j);
      bx = pencil.B * x;
    }
    const double nb = std::sqrt(std::max(x.dot(bx), 0.0));
    if (nb <= 1e-200) throw NumericalError("eigenvector with zero B-norm");
    x /= nb;
    res.vectors.col(i) = x;
    bcols.push_back(pencil.B * x);
    res.values.push_back(raw.values[order[i]]);
  }

  // residuals: ||A x - theta B x|| / (||A x|| + |theta| ||B x||)
  Eigen::SimplicialLDLT<SpMat> mz;
  if (pencil.product) {
    mz.compute(pencil.Mz);
    if (mz.info() != Eigen::Success) throw NumericalError("Mz factorization failed");
  }
  for (int i = 0; i < keep; ++i) {
    const VectorXd x = res.vectors.col(i);
    VectorXd ax;
    if (pencil.product) {
      ax = SpMat(pencil.G.transpose()) * mz.solve(pencil.G * x);
    } else {
      ax = pencil.A * x;
    }
    const VectorXd bx = pencil.B * x;
    const double denom = ax.norm() + std::abs(res.values[i]) * bx.norm();
    const double r = (ax - res.values[i] * bx).norm() / std::max(denom, 1e-290);
    res.residual_norms.push_back(r);
  }
  res.clusters = cluster_values(res.values, opts.cluster_tol);
  return res;
}

}  // namespace speclab
