#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace tensorial {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Error taxonomy shared by every module. The CLI maps these to exit codes.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
/// A documented precondition of an operation does not hold for its inputs.
struct PreconditionError : InputError {
  using InputError::InputError;
};
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kMaxTotalDim = 64;

/// Factor dimensions of a tensor space, flattened row-major.
class TensorShape {
 public:
  TensorShape() = default;
  explicit TensorShape(std::vector<int> dims);

  const std::vector<int>& dims() const { return dims_; }
  int order() const { return static_cast<int>(dims_.size()); }
  int dim(int i) const { return dims_[i]; }
  int total() const { return total_; }

  // index = sum_i k_i * prod_{j>i} d_j
  int flatten(const std::vector<int>& k) const;
  std::vector<int> unflatten(int index) const;
  int stride(int i) const;

  std::string str() const;  // "2x3"
  static TensorShape parse(const std::string& s);

  bool operator==(const TensorShape& o) const { return dims_ == o.dims_; }
  bool operator!=(const TensorShape& o) const { return !(*this == o); }

 private:
  std::vector<int> dims_;
  int total_ = 0;
};

Vec kron_vec(const std::vector<Vec>& xs, const TensorShape& shape);
Vec kron_vec(const std::vector<Vec>& xs);
Mat kron_mat(const std::vector<Mat>& ms);

/// Permutation matrix U_sigma with U(x^1 (x) ... (x) x^l) = x^{sigma(1)} (x) ... (x) x^{sigma(l)}.
/// Slot i of the output holds input slot sigma[i] (0-based).
Mat slot_permutation(const TensorShape& in, const std::vector<int>& sigma);

/// An element (T_1 (x) ... (x) T_l) U_sigma of GL_(x).
class FactorMap {
 public:
  FactorMap() = default;
  FactorMap(std::vector<Mat> factors, std::vector<int> perm, TensorShape source);

  static FactorMap identity(const TensorShape& s);

  const std::vector<Mat>& factors() const { return factors_; }
  const std::vector<int>& perm() const { return perm_; }
  const TensorShape& source() const { return source_; }
  const TensorShape& target() const { return target_; }

  Vec apply(const Vec& x) const;
  Mat matrix() const;  // materialized total x total matrix
  FactorMap compose(const FactorMap& inner) const;  // this o inner
  FactorMap inverse() const;
  bool orthogonal(double tol = 1e-10) const;

 private:
  std::vector<Mat> factors_;
  std::vector<int> perm_;
  TensorShape source_, target_;
};

/// Permutations sigma admissible on a shape (dims must match slot-wise).
std::vector<std::vector<int>> admissible_perms(const TensorShape& s);

struct SymEigen {
  Vec values;   // ascending
  Mat vectors;  // columns
};

/// Cyclic Jacobi; stops when the off-diagonal Frobenius norm is <= tol * ||M||_F.
SymEigen jacobi_eigen(const Mat& m, double tol = 1e-12);

Mat spd_sqrt(const Mat& m);
Mat spd_inv_sqrt(const Mat& m);
Mat spd_inverse(const Mat& m);
bool is_spd(const Mat& m, double tol = 1e-12);

Mat symmetrize(const Mat& m);

// Random helpers; every caller passes its own engine.
using Rng = std::mt19937_64;
Vec random_unit(int d, Rng& rng);
Mat random_orthogonal(int d, Rng& rng);
Mat random_well_conditioned(int d, Rng& rng, double spread = 0.5);

}  // namespace tensorial
