#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace eigadm {

/// Positive, non-increasing eigenvalue vector. Ties are allowed.
class Spectrum {
 public:
  enum class Role { sample, population };

  /// Throws Error(invalid_input) unless every value is finite, positive,
  /// and the sequence is non-increasing. Empty spectra are rejected.
  Spectrum(std::vector<double> values, Role role);

  static Spectrum sample(std::vector<double> values) { return {std::move(values), Role::sample}; }
  static Spectrum population(std::vector<double> values) {
    return {std::move(values), Role::population};
  }

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double largest() const noexcept { return values_.front(); }
  double sum() const noexcept;
  std::span<const double> values() const noexcept { return values_; }
  Role role() const noexcept { return role_; }

  Spectrum scaled(double c) const;

  friend bool operator==(const Spectrum&, const Spectrum&) = default;

 private:
  std::vector<double> values_;
  Role role_;
};

}  // namespace eigadm
