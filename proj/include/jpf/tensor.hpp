#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace jpf {

/// Dense table over nonempty subsequence pairs Q[i,j; h,l] with
/// 1 <= i <= j <= n and 1 <= h <= l <= m, packed triangle-by-triangle.
class DPTensor4 {
 public:
  DPTensor4() = default;
  DPTensor4(int n, int m) : n_(n), m_(m) {
    row_r_.resize(n + 2);
    row_s_.resize(m + 2);
    std::size_t acc = 0;
    for (int i = 1; i <= n; ++i) {
      row_r_[i] = acc;
      acc += static_cast<std::size_t>(n - i + 1);
    }
    tri_r_ = acc;
    acc = 0;
    for (int h = 1; h <= m; ++h) {
      row_s_[h] = acc;
      acc += static_cast<std::size_t>(m - h + 1);
    }
    tri_s_ = acc;
    data_.assign(tri_r_ * tri_s_, 0.0);
  }

  static std::size_t cells(int n, int m) {
    return static_cast<std::size_t>(n) * (n + 1) / 2 *
           (static_cast<std::size_t>(m) * (m + 1) / 2);
  }

  bool allocated() const { return !data_.empty(); }
  int n() const { return n_; }
  int m() const { return m_; }
  std::size_t size() const { return data_.size(); }

  std::size_t offset(int i, int j, int h, int l) const {
    assert(1 <= i && i <= j && j <= n_);
    assert(1 <= h && h <= l && l <= m_);
    return (row_r_[i] + (j - i)) * tri_s_ + row_s_[h] + (l - h);
  }
  double& operator()(int i, int j, int h, int l) { return data_[offset(i, j, h, l)]; }
  double operator()(int i, int j, int h, int l) const { return data_[offset(i, j, h, l)]; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

 private:
  int n_ = 0, m_ = 0;
  std::size_t tri_r_ = 0, tri_s_ = 0;
  std::vector<std::size_t> row_r_, row_s_;
  std::vector<double> data_;
};

/// Square table over intervals [a,b] of one strand, 1 <= a <= n+1,
/// a-1 <= b <= n, so empty intervals have a slot too.
class Table2 {
 public:
  Table2() = default;
  explicit Table2(int n) : n_(n), stride_(n + 2), data_((n + 2) * (n + 2), 0.0) {}
  std::size_t offset(int a, int b) const {
    assert(a >= 1 && a <= n_ + 1 && b >= a - 1 && b <= n_);
    return static_cast<std::size_t>(a) * stride_ + b;
  }
  double& operator()(int a, int b) { return data_[offset(a, b)]; }
  double operator()(int a, int b) const { return data_[offset(a, b)]; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  int n() const { return n_; }
  bool allocated() const { return !data_.empty(); }
  std::size_t size() const { return data_.size(); }

 private:
  int n_ = 0;
  std::size_t stride_ = 0;
  std::vector<double> data_;
};

}  // namespace jpf
