#include "benchpress/data_matrix.hpp"

#include <cmath>
#include <cstring>

#include "benchpress/error.hpp"
#include "benchpress/rng.hpp"

namespace benchpress {

void DataMatrix::validate() const {
  if (static_cast<std::size_t>(values.cols()) != labels.size() && values.rows() > 0)
    throw InvalidArgument("data has " + std::to_string(values.cols()) + " columns but " +
                          std::to_string(labels.size()) + " labels");
  if (!cardinalities) return;
  if (cardinalities->size() != labels.size())
    throw InvalidArgument("cardinality row length does not match the number of columns");
  for (std::size_t c = 0; c < cols(); ++c) {
    const int card = (*cardinalities)[c];
    if (card < 1) throw InvalidArgument("cardinality of '" + labels[c] + "' must be >= 1");
    for (Eigen::Index r = 0; r < values.rows(); ++r) {
      const double v = values(r, static_cast<Eigen::Index>(c));
      if (v != std::floor(v) || v < 0 || v >= card)
        throw InvalidArgument("value " + std::to_string(v) + " in column '" + labels[c] +
                              "' outside [0, " + std::to_string(card - 1) + "]");
    }
  }
}

std::uint64_t DataMatrix::fingerprint() const {
  std::uint64_t h = fnv1a64("datamatrix");
  for (const auto& l : labels) h = fnv1a64(l + '\x1f', h);
  if (cardinalities)
    for (int c : *cardinalities) h = fnv1a64(std::to_string(c) + ',', h);
  h = fnv1a64(std::to_string(values.rows()) + 'x' + std::to_string(values.cols()), h);
  for (Eigen::Index c = 0; c < values.cols(); ++c) {
    for (Eigen::Index r = 0; r < values.rows(); ++r) {
      const double v = values(r, c);
      char bytes[sizeof(double)];
      std::memcpy(bytes, &v, sizeof v);
      h = fnv1a64(std::string_view(bytes, sizeof bytes), h);
    }
  }
  return h;
}

}  // namespace benchpress
