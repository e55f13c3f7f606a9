#include "sbnmf/dataset.hpp"

#include <string>

#include "sbnmf/errors.hpp"

namespace sbn {

BitmapDataset::BitmapDataset(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
  if (rows == 0 || cols == 0) {
    throw InvalidArgument("bitmap dimensions must be positive");
  }
}

void BitmapDataset::add(std::vector<Bit> pattern) {
  if (pattern.size() != width()) {
    throw InvalidArgument("pattern has " + std::to_string(pattern.size()) + " pixels, expected " +
                          std::to_string(width()));
  }
  for (Bit b : pattern) {
    if (b > 1) {
      throw InvalidArgument("pattern entries must be 0 or 1");
    }
  }
  patterns_.push_back(std::move(pattern));
}

}  // namespace sbn
