#ifndef SBNMF_DATASET_HPP
#define SBNMF_DATASET_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "sbnmf/network.hpp"

namespace sbn {

/// Fixed-size binary images stored row-major, one pattern per entry.
class BitmapDataset {
public:
  BitmapDataset(std::size_t rows, std::size_t cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t width() const noexcept { return rows_ * cols_; }
  std::size_t size() const noexcept { return patterns_.size(); }

  /// Throws InvalidArgument on wrong length or non-binary entries.
  void add(std::vector<Bit> pattern);
  std::span<const Bit> pattern(std::size_t k) const { return patterns_.at(k); }

private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::vector<Bit>> patterns_;
};

}  // namespace sbn

#endif  // SBNMF_DATASET_HPP
