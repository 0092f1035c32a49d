#include "svlab/numerics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <sstream>

#include "svlab/error.hpp"

namespace svlab {

double compensated_total(std::span<const double> values) noexcept {
  CompensatedSum s;
  for (double v : values) s.add(v);
  return s.value();
}

MeanAndError mean_and_error(std::span<const double> samples) {
  if (samples.empty()) throw InvalidInput("mean of an empty sample");
  const double n = static_cast<double>(samples.size());
  const double mean = compensated_total(samples) / n;
  if (samples.size() == 1) return {mean, 0.0};
  CompensatedSum ss;
  for (double v : samples) ss.add((v - mean) * (v - mean));
  const double var = ss.value() / (n - 1.0);
  return {mean, std::sqrt(var / n)};
}

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  if (a == b) return 0.0;
  double err = 0.0;
  double l1 = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 25, rel_tol, &err, &l1);
  if (!std::isfinite(value) || err > std::max(rel_tol * l1, 1e-300) * 100.0) {
    std::ostringstream os;
    os << "quadrature did not converge on [" << a << ", " << b << "]: estimate " << value << ", error " << err;
    throw NumericalAbort(os.str());
  }
  return value;
}

}  // namespace svlab
