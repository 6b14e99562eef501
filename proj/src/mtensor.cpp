#include "kahler/mtensor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kahler {

namespace {

std::size_t ipow(int base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
  return r;
}

}  // namespace

MTensor::MTensor(int dim, std::vector<Slot> slots)
    : dim_(dim), slots_(std::move(slots)) {
  if (dim <= 0) throw std::invalid_argument("MTensor: dimension must be positive");
  data_.assign(ipow(dim_, rank()), 0.0);
}

std::size_t MTensor::offset(std::span<const int> idx) const {
  std::size_t off = 0;
  for (int i : idx) off = off * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
  return off;
}

double MTensor::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

bool MTensor::same_shape(const MTensor& other) const noexcept {
  return dim_ == other.dim_ && slots_ == other.slots_;
}

MTensor& MTensor::operator+=(const MTensor& other) {
  if (!same_shape(other)) throw std::invalid_argument("MTensor: shape mismatch in +=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

MTensor& MTensor::operator-=(const MTensor& other) {
  if (!same_shape(other)) throw std::invalid_argument("MTensor: shape mismatch in -=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

MTensor& MTensor::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

MTensor MTensor::transformed_axis(int axis, const Eigen::MatrixXd& m) const {
  if (axis < 0 || axis >= rank()) throw std::out_of_range("MTensor: axis out of range");
  if (m.rows() != dim_ || m.cols() != dim_)
    throw std::invalid_argument("MTensor: transform matrix has wrong size");
  MTensor out(dim_, slots_);
  const std::size_t d = static_cast<std::size_t>(dim_);
  const std::size_t inner = ipow(dim_, rank() - axis - 1);
  const std::size_t outer = ipow(dim_, axis);
  for (std::size_t o = 0; o < outer; ++o) {
    const std::size_t base = o * d * inner;
    for (std::size_t a = 0; a < d; ++a) {
      double* dst = out.data_.data() + base + a * inner;
      for (std::size_t b = 0; b < d; ++b) {
        const double w = m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
        if (w == 0.0) continue;
        const double* src = data_.data() + base + b * inner;
        for (std::size_t k = 0; k < inner; ++k) dst[k] += w * src[k];
      }
    }
  }
  return out;
}

MTensor MTensor::permuted(std::span<const int> perm) const {
  if (static_cast<int>(perm.size()) != rank())
    throw std::invalid_argument("MTensor: permutation has wrong length");
  std::vector<Slot> slots(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) slots[k] = slots_[static_cast<std::size_t>(perm[k])];
  MTensor out(dim_, std::move(slots));
  std::vector<int> src(perm.size());
  for_each_index(dim_, rank(), [&](std::span<const int> idx) {
    for (std::size_t k = 0; k < perm.size(); ++k) src[static_cast<std::size_t>(perm[k])] = idx[k];
    out.at(idx) = at(src);
  });
  return out;
}

Eigen::VectorXd MTensor::flattened() const {
  return Eigen::Map<const Eigen::VectorXd>(data_.data(), static_cast<Eigen::Index>(data_.size()));
}

void MTensor::assign_flat(const Eigen::VectorXd& values) {
  if (static_cast<std::size_t>(values.size()) != data_.size())
    throw std::invalid_argument("MTensor: flat size mismatch");
  std::copy(values.data(), values.data() + values.size(), data_.begin());
}

MTensor operator-(MTensor a, const MTensor& b) { return a -= b; }
MTensor operator+(MTensor a, const MTensor& b) { return a += b; }

double max_abs_diff(const MTensor& a, const MTensor& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

MTensor BundleTensor::block(std::initializer_list<Part> parts) const {
  if (static_cast<int>(parts.size()) != comps.rank())
    throw std::invalid_argument("BundleTensor::block: one part per slot required");
  const int nn = n();
  MTensor out(nn, comps.slots());
  std::vector<int> full(parts.size());
  for_each_index(nn, comps.rank(), [&](std::span<const int> idx) {
    std::size_t k = 0;
    for (Part p : parts) {
      full[k] = idx[k] + (p == Part::V ? nn : 0);
      ++k;
    }
    out.at(idx) = comps.at(full);
  });
  return out;
}

void BundleTensor::set_block(std::initializer_list<Part> parts, const MTensor& values) {
  if (static_cast<int>(parts.size()) != comps.rank() || values.dim() != n() ||
      values.rank() != comps.rank())
    throw std::invalid_argument("BundleTensor::set_block: block shape mismatch");
  const int nn = n();
  std::vector<int> full(parts.size());
  for_each_index(nn, comps.rank(), [&](std::span<const int> idx) {
    std::size_t k = 0;
    for (Part p : parts) {
      full[k] = idx[k] + (p == Part::V ? nn : 0);
      ++k;
    }
    comps.at(full) = values.at(idx);
  });
}

}  // namespace kahler
