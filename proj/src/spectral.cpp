#include "simplexwalk/spectral.hpp"

#include <cmath>
#include <set>

namespace simplexwalk {

namespace {

struct Line {
  double slope;
  double slope_variance;
};

Line weighted_line(const std::vector<double>& x, const std::vector<double>& y,
                   const std::vector<double>& w)
{
  double s = 0, sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += w[i];
    sx += w[i] * x[i];
    sy += w[i] * y[i];
  }
  const double xbar = sx / s;
  const double ybar = sy / s;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += w[i] * (x[i] - xbar) * (x[i] - xbar);
    sxy += w[i] * (x[i] - xbar) * (y[i] - ybar);
  }
  if (!(sxx > 0)) throw SimplexError("fit_decay_rate: window spans a single time");
  return {sxy / sxx, 1.0 / sxx};
}

}  // namespace

DecayFit fit_decay_rate(const std::vector<double>& times, const std::vector<double>& means,
                        const std::vector<double>& standard_errors)
{
  if (times.size() != means.size() || times.size() != standard_errors.size()) {
    throw SimplexError("fit_decay_rate: series lengths differ");
  }
  std::size_t end = 0;
  while (end < times.size() && means[end] > 0.0 && means[end] > 5.0 * standard_errors[end]) ++end;
  if (end < 3) {
    throw SimplexError("fit_decay_rate: fewer than 3 points above 5 standard errors (" +
                       std::to_string(end) + ")");
  }

  std::vector<double> xe, ye, xn, yn, wn;
  for (std::size_t i = 0; i < end; ++i) {
    const double y = std::log(means[i]);
    if (standard_errors[i] == 0.0) {
      xe.push_back(times[i]);
      ye.push_back(y);
    } else {
      const double rel = standard_errors[i] / means[i];
      xn.push_back(times[i]);
      yn.push_back(y);
      wn.push_back(1.0 / (rel * rel));
    }
  }

  DecayFit fit;
  fit.window_begin = times.front();
  fit.window_end = times[end - 1];
  fit.points = int(end);

  const std::set<double> exact_times(xe.begin(), xe.end());
  if (exact_times.empty()) {
    const auto line = weighted_line(xn, yn, wn);
    fit.rate = -line.slope;
    fit.standard_error = std::sqrt(line.slope_variance);
  } else if (exact_times.size() == 1) {
    const double t0 = xe.front();
    double y0 = 0;
    for (double y : ye) y0 += y;
    y0 /= double(ye.size());
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xn.size(); ++i) {
      sxx += wn[i] * (xn[i] - t0) * (xn[i] - t0);
      sxy += wn[i] * (xn[i] - t0) * (yn[i] - y0);
    }
    if (!(sxx > 0)) throw SimplexError("fit_decay_rate: no noisy points away from the exact one");
    fit.rate = -sxy / sxx;
    fit.standard_error = std::sqrt(1.0 / sxx);
  } else {
    const std::vector<double> ones(xe.size(), 1.0);
    const auto line = weighted_line(xe, ye, ones);
    fit.rate = -line.slope;
    double rss = 0;
    double xbar = 0, ybar = 0;
    for (std::size_t i = 0; i < xe.size(); ++i) {
      xbar += xe[i];
      ybar += ye[i];
    }
    xbar /= double(xe.size());
    ybar /= double(xe.size());
    for (std::size_t i = 0; i < xe.size(); ++i) {
      const double r = ye[i] - ybar - line.slope * (xe[i] - xbar);
      rss += r * r;
    }
    fit.standard_error =
        xe.size() > 2 ? std::sqrt(rss / double(xe.size() - 2) * line.slope_variance) : 0.0;
  }
  if (!std::isfinite(fit.rate)) throw SimplexError("fit_decay_rate: non-finite rate");
  return fit;
}

}  // namespace simplexwalk
