#include "sci/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "sci/errors.hpp"

namespace sci {

double psnr(const VideoCube& reference, const VideoCube& estimate, double peak) {
  if (reference.shape() != estimate.shape()) throw DimensionError("psnr: shape mismatch");
  auto r = reference.data();
  auto e = estimate.data();
  double sse = 0.0;
  for (std::size_t n = 0; n < r.size(); ++n) sse += (r[n] - e[n]) * (r[n] - e[n]);
  const double mse = sse / static_cast<double>(r.size());
  if (mse == 0.0) return kPsnrCap;
  return std::min(kPsnrCap, 10.0 * std::log10(peak * peak / mse));
}

}  // namespace sci
