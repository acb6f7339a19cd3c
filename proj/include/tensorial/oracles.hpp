#pragma once

// Concrete oracle kernels behind Kind::Implicit bodies.

#include "tensorial/body.hpp"

namespace tensorial {

class SchattenOracle : public Oracle {
 public:
  SchattenOracle(double p, int d1, int d2) : p_(p), d1_(d1), d2_(d2) {}
  int dim() const override { return d1_ * d2_; }
  Touch support_at(const Vec& u) const override;
  Touch gauge_at(const Vec& x) const override;
  std::string name() const override;
  double p() const { return p_; }
  int d1() const { return d1_; }
  int d2() const { return d2_; }

 private:
  double p_;
  int d1_, d2_;
};

class ImageOracle : public Oracle {
 public:
  ImageOracle(Mat l, Body inner);
  int dim() const override { return static_cast<int>(l_.rows()); }
  Touch support_at(const Vec& u) const override;
  Touch gauge_at(const Vec& x) const override;
  std::string name() const override;
  const Mat& map() const { return l_; }
  const Mat& inverse() const { return linv_; }
  const Body& inner() const { return inner_; }

 private:
  Mat l_, linv_;
  Body inner_;
};

class PolarOracle : public Oracle {
 public:
  explicit PolarOracle(Body inner) : inner_(std::move(inner)) {}
  int dim() const override { return inner_.dim(); }
  Touch support_at(const Vec& u) const override { return tensorial::gauge_at(inner_, u); }
  Touch gauge_at(const Vec& x) const override { return tensorial::support_at(inner_, x); }
  std::string name() const override { return "polar(" + inner_.describe() + ")"; }
  const Body& inner() const { return inner_; }

 private:
  Body inner_;
};

class SumOracle : public Oracle {
 public:
  explicit SumOracle(std::vector<Body> terms);
  int dim() const override { return terms_[0].dim(); }
  Touch support_at(const Vec& u) const override;
  Touch gauge_at(const Vec& x) const override;
  std::string name() const override;
  const std::vector<Body>& terms() const { return terms_; }

 private:
  std::vector<Body> terms_;
};

class UnionOracle : public Oracle {
 public:
  explicit UnionOracle(std::vector<Body> parts);
  int dim() const override { return parts_[0].dim(); }
  Touch support_at(const Vec& u) const override;
  Touch gauge_at(const Vec& x) const override;
  std::string name() const override;
  const std::vector<Body>& parts() const { return parts_; }

 private:
  std::vector<Body> parts_;
};

/// conv of x_1 (x) ... (x) x_l over x_i in P_i, for factors that are not all polytopes.
class ProjectiveOracle : public Oracle {
 public:
  ProjectiveOracle(std::vector<Body> factors, TensorShape shape);
  int dim() const override { return shape_.total(); }
  Touch support_at(const Vec& u) const override;
  Touch gauge_at(const Vec& x) const override;
  std::string name() const override;
  const std::vector<Body>& factors() const { return factors_; }

 private:
  std::vector<Body> factors_;
  TensorShape shape_;
};

/// {x : E x in s P}, the restriction of P to the range of E.
class SliceOracle : public Oracle {
 public:
  SliceOracle(Body body, Mat embed, double s) : body_(std::move(body)), embed_(std::move(embed)), s_(s) {}
  int dim() const override { return static_cast<int>(embed_.cols()); }
  Touch support_at(const Vec& u) const override;
  Touch gauge_at(const Vec& x) const override;
  std::string name() const override;
  const Body& body() const { return body_; }
  const Mat& embed() const { return embed_; }
  double s() const { return s_; }

 private:
  Body body_;
  Mat embed_;
  double s_;
};

template <class T>
const T* oracle_as(const Body& b) {
  if (b.kind() != Kind::Implicit) return nullptr;
  return dynamic_cast<const T*>(&b.oracle());
}

/// Contract u (a tensor of `shape`) against fixed vectors in every slot but `keep`.
Vec contract_except(const Vec& u, const TensorShape& shape, const std::vector<Vec>& xs, int keep);

}  // namespace tensorial
