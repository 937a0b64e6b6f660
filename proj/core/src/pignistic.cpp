#include "qdb/pignistic.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace qdb {

MassFunction::MassFunction(std::set<std::string> frame,
                           std::map<Subset, double> masses)
    : frame_(std::move(frame)), masses_(std::move(masses)) {
  if (frame_.empty()) {
    throw std::invalid_argument("MassFunction: frame must be non-empty");
  }
  double total = 0.0;
  for (const auto& [subset, mass] : masses_) {
    if (subset.empty()) {
      throw std::invalid_argument(
          "MassFunction: the empty set cannot carry mass");
    }
    for (const auto& label : subset) {
      if (!frame_.contains(label)) {
        std::ostringstream msg;
        msg << "MassFunction: label '" << label << "' is not in the frame";
        throw std::invalid_argument(msg.str());
      }
    }
    if (!std::isfinite(mass) || mass < 0.0) {
      std::ostringstream msg;
      msg << "MassFunction: mass " << mass << " must be non-negative";
      throw std::invalid_argument(msg.str());
    }
    total += mass;
  }
  if (std::abs(total - 1.0) > kMassSumTol) {
    std::ostringstream msg;
    msg << "MassFunction: masses sum to " << total << ", not 1 within "
        << kMassSumTol;
    throw std::invalid_argument(msg.str());
  }
}

std::map<std::string, double> pignistic_transform(const MassFunction& m) {
  std::map<std::string, double> bet;
  for (const auto& label : m.frame()) {
    bet[label] = 0.0;
  }
  for (const auto& [subset, mass] : m.masses()) {
    const double share = mass / static_cast<double>(subset.size());
    for (const auto& label : subset) {
      bet[label] += share;
    }
  }
  return bet;
}

}  // namespace qdb
