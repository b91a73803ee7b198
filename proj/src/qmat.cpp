#include "entbroadcast/qmat.hpp"

#include <cmath>
#include <numeric>

namespace entbroadcast::qmat {

int SubsystemShape::total() const {
  int n = 1;
  for (int d : dims) {
    if (d <= 0) throw shape_error("SubsystemShape: nonpositive local dimension");
    n *= d;
  }
  return n;
}

void SubsystemShape::require_matches(const CMat& m) const {
  if (m.rows() != m.cols()) throw shape_error("expected a square matrix");
  if (m.rows() != total()) {
    throw shape_error("subsystem dims (" + std::to_string(total()) +
                      ") do not match matrix dimension (" + std::to_string(m.rows()) + ")");
  }
}

bool is_hermitian(const CMat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

void require_density(const CMat& m) {
  if (m.rows() != m.cols()) throw invalid_state_error("density matrix must be square");
  if (!is_hermitian(m)) throw invalid_state_error("density matrix is not Hermitian");
  if (std::abs(m.trace().real() - 1.0) > 1e-12 || std::abs(m.trace().imag()) > 1e-12) {
    throw invalid_state_error("density matrix trace differs from 1");
  }
  Eigen::SelfAdjointEigenSolver<CMat> es(m, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < state_reject_threshold) {
    throw invalid_state_error("density matrix has a significantly negative eigenvalue");
  }
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

namespace {

std::vector<int> strides_of(const std::vector<int>& dims) {
  std::vector<int> s(dims.size());
  int acc = 1;
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    s[k] = acc;
    acc *= dims[k];
  }
  return s;
}

// Enumerates all offsets sum_k i_k * stride[k] with i_k < dims[k].
std::vector<int> offsets_of(const std::vector<int>& dims, const std::vector<int>& strides) {
  std::vector<int> offs{0};
  for (std::size_t k = 0; k < dims.size(); ++k) {
    std::vector<int> next;
    next.reserve(offs.size() * dims[k]);
    for (int base : offs)
      for (int i = 0; i < dims[k]; ++i) next.push_back(base + i * strides[k]);
    offs = std::move(next);
  }
  return offs;
}

}  // namespace

CMat partial_trace(const CMat& m, const SubsystemShape& shape, const std::vector<int>& keep) {
  shape.require_matches(m);
  if (keep.empty()) throw shape_error("partial_trace: keep set must be nonempty");
  const int nsub = static_cast<int>(shape.dims.size());
  std::vector<bool> kept(nsub, false);
  for (int k : keep) {
    if (k < 0 || k >= nsub) throw shape_error("partial_trace: keep index out of range");
    if (kept[k]) throw shape_error("partial_trace: repeated keep index");
    kept[k] = true;
  }
  const auto strides = strides_of(shape.dims);

  std::vector<int> keep_dims, keep_strides, traced_dims, traced_strides;
  for (int k : keep) {
    keep_dims.push_back(shape.dims[k]);
    keep_strides.push_back(strides[k]);
  }
  for (int k = 0; k < nsub; ++k) {
    if (!kept[k]) {
      traced_dims.push_back(shape.dims[k]);
      traced_strides.push_back(strides[k]);
    }
  }

  const auto keep_offs = offsets_of(keep_dims, keep_strides);
  const auto traced_offs = offsets_of(traced_dims, traced_strides);
  const int dout = static_cast<int>(keep_offs.size());

  CMat out = CMat::Zero(dout, dout);
  for (int t : traced_offs)
    for (int i = 0; i < dout; ++i)
      for (int j = 0; j < dout; ++j) out(i, j) += m(keep_offs[i] + t, keep_offs[j] + t);
  return out;
}

CMat partial_transpose(const CMat& m, const SubsystemShape& shape, int sub) {
  shape.require_matches(m);
  if (shape.dims.size() != 2) throw shape_error("partial_transpose: shape must be bipartite");
  if (sub != 0 && sub != 1) throw shape_error("partial_transpose: sub must be 0 or 1");
  const int d0 = shape.dims[0], d1 = shape.dims[1];
  CMat out(m.rows(), m.cols());
  for (int a = 0; a < d0; ++a)
    for (int b = 0; b < d1; ++b)
      for (int c = 0; c < d0; ++c)
        for (int d = 0; d < d1; ++d) {
          const int r = a * d1 + b, col = c * d1 + d;
          const int rt = (sub == 0) ? c * d1 + b : a * d1 + d;
          const int ct = (sub == 0) ? a * d1 + d : c * d1 + b;
          out(rt, ct) = m(r, col);
        }
  return out;
}

EigResult herm_eig(const CMat& m) {
  if (m.rows() != m.cols()) throw shape_error("herm_eig: matrix must be square");
  if (!is_hermitian(m)) throw std::invalid_argument("herm_eig: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMat> es((m + m.adjoint()) / 2.0);
  if (es.info() != Eigen::Success) throw std::runtime_error("herm_eig: eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

CMat psd_sqrt(const CMat& m) {
  auto [vals, vecs] = herm_eig(m);
  if (vals.minCoeff() < state_reject_threshold) {
    throw invalid_state_error("psd_sqrt: matrix has a significantly negative eigenvalue");
  }
  Eigen::VectorXd roots(vals.size());
  for (Eigen::Index i = 0; i < vals.size(); ++i) roots[i] = std::sqrt(std::max(vals[i], 0.0));
  return vecs * roots.asDiagonal() * vecs.adjoint();
}

double von_neumann_entropy(const CMat& rho) {
  require_density(rho);
  auto [vals, vecs] = herm_eig(rho);
  double s = 0.0;
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    const double l = vals[i];
    if (l > 0.0) s -= l * std::log2(l);
  }
  return s;
}

}  // namespace entbroadcast::qmat
