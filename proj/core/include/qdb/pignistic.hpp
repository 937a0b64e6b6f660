#pragma once

#include <map>
#include <set>
#include <string>

namespace qdb {

inline constexpr double kMassSumTol = 1e-12;

// Basic probability assignment over non-empty subsets of a finite frame.
// Masses are non-negative and sum to 1 within kMassSumTol.
class MassFunction {
 public:
  using Subset = std::set<std::string>;

  MassFunction(std::set<std::string> frame, std::map<Subset, double> masses);

  const std::set<std::string>& frame() const { return frame_; }
  const std::map<Subset, double>& masses() const { return masses_; }

 private:
  std::set<std::string> frame_;
  std::map<Subset, double> masses_;
};

// Insufficient-reason split: bet(x) = Σ_{S ∋ x} m(S) / |S|. Every frame
// element appears in the result, possibly with probability 0.
std::map<std::string, double> pignistic_transform(const MassFunction& m);

}  // namespace qdb
