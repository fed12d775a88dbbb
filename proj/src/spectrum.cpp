#include "eigadm/spectrum.h"

#include <cmath>
#include <numeric>
#include <string>

#include "eigadm/error.h"

namespace eigadm {

Spectrum::Spectrum(std::vector<double> values, Role role) : values_(std::move(values)), role_(role) {
  if (values_.empty()) {
    throw Error(Errc::invalid_input, "spectrum must have at least one value");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    if (!std::isfinite(v) || v <= 0.0) {
      throw Error(Errc::invalid_input,
                  "spectrum value " + std::to_string(i) + " is not finite and positive");
    }
    if (i > 0 && v > values_[i - 1]) {
      throw Error(Errc::invalid_input, "spectrum is not in descending order at index " +
                                           std::to_string(i));
    }
  }
}

double Spectrum::sum() const noexcept { return std::accumulate(values_.begin(), values_.end(), 0.0); }

Spectrum Spectrum::scaled(double c) const {
  std::vector<double> out(values_);
  for (double& v : out) v *= c;
  return {std::move(out), role_};
}

}  // namespace eigadm
