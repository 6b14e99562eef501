#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace kahler {

enum class Slot : unsigned char { Up, Down };

/// Dense component array of a tensor whose indices all range over [0, dim).
///
/// Components are stored row-major in slot order, so `T(a, b, c)` is the
/// component with first index a. The slot list records variance only; no
/// raising or lowering happens implicitly.
class MTensor {
 public:
  MTensor() = default;
  MTensor(int dim, std::vector<Slot> slots);

  int dim() const noexcept { return dim_; }
  int rank() const noexcept { return static_cast<int>(slots_.size()); }
  const std::vector<Slot>& slots() const noexcept { return slots_; }
  std::size_t size() const noexcept { return data_.size(); }

  template <class... I>
  double& operator()(I... idx) {
    return data_[offset({static_cast<int>(idx)...})];
  }
  template <class... I>
  double operator()(I... idx) const {
    return data_[offset({static_cast<int>(idx)...})];
  }

  double& at(std::span<const int> idx) { return data_[offset(idx)]; }
  double at(std::span<const int> idx) const { return data_[offset(idx)]; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  double max_abs() const;
  bool same_shape(const MTensor& other) const noexcept;

  MTensor& operator+=(const MTensor& other);
  MTensor& operator-=(const MTensor& other);
  MTensor& operator*=(double s);

  /// T'[.., a, ..] = sum_b m(a, b) T[.., b, ..] along `axis`.
  MTensor transformed_axis(int axis, const Eigen::MatrixXd& m) const;

  /// Result axis k is source axis perm[k].
  MTensor permuted(std::span<const int> perm) const;

  Eigen::VectorXd flattened() const;
  void assign_flat(const Eigen::VectorXd& values);

 private:
  std::size_t offset(std::initializer_list<int> idx) const {
    return offset(std::span<const int>(idx.begin(), idx.size()));
  }
  std::size_t offset(std::span<const int> idx) const;

  int dim_ = 0;
  std::vector<Slot> slots_;
  std::vector<double> data_;
};

MTensor operator-(MTensor a, const MTensor& b);
MTensor operator+(MTensor a, const MTensor& b);

/// Throws std::invalid_argument when shapes differ.
double max_abs_diff(const MTensor& a, const MTensor& b);

/// Visits every multi-index of a rank-`rank` array over [0, dim) in
/// row-major order.
template <class F>
void for_each_index(int dim, int rank, F&& f) {
  std::vector<int> idx(static_cast<std::size_t>(rank), 0);
  if (dim <= 0) return;
  while (true) {
    f(std::span<const int>(idx));
    int k = rank - 1;
    while (k >= 0 && ++idx[static_cast<std::size_t>(k)] == dim) {
      idx[static_cast<std::size_t>(k)] = 0;
      --k;
    }
    if (k < 0) return;
  }
}

// Adapted-frame bookkeeping for tensors on the 2n-dimensional bundle.

enum class Basis { Adapted, Coordinate };

/// Horizontal (delta/delta q) or vertical (d/dp) half of a bundle index.
/// In the coordinate basis the same labels select the q and p halves.
enum class Part { H, V };

/// A tensor on the bundle with all indices ranging over [0, 2n), tagged with
/// the frame its components refer to. Horizontal slots come first.
struct BundleTensor {
  MTensor comps;
  Basis basis = Basis::Adapted;

  int n() const noexcept { return comps.dim() / 2; }

  /// The n-dimensional block selected by one Part per slot.
  MTensor block(std::initializer_list<Part> parts) const;
  void set_block(std::initializer_list<Part> parts, const MTensor& values);
};

}  // namespace kahler
