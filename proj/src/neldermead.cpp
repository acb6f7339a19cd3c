#include "tensorial/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tensorial {

// Adaptive coefficients (Gao & Han) behave better above a handful of dimensions.
NMResult nelder_mead(const std::function<double(const Vec&)>& f, const Vec& x0, const NMOptions& opt) {
  const int n = static_cast<int>(x0.size());
  const double nd = std::max(n, 1);
  const double alpha = 1, beta = 1 + 2 / nd, gamma = 0.75 - 1 / (2 * nd), delta = 1 - 1 / nd;
  std::vector<Vec> s(n + 1, x0);
  std::vector<double> fs(n + 1);
  for (int i = 0; i < n; ++i) s[i + 1](i) += (x0(i) != 0 ? opt.step * std::max(1.0, std::abs(x0(i))) : opt.step);
  NMResult res;
  for (int i = 0; i <= n; ++i) fs[i] = f(s[i]);
  res.evals = n + 1;
  std::vector<int> idx(n + 1);
  while (res.evals < opt.max_evals) {
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fs[a] < fs[b]; });
    std::vector<Vec> s2(n + 1);
    std::vector<double> f2(n + 1);
    for (int i = 0; i <= n; ++i) {
      s2[i] = s[idx[i]];
      f2[i] = fs[idx[i]];
    }
    s.swap(s2);
    fs.swap(f2);
    double xspread = 0;
    for (int i = 1; i <= n; ++i) xspread = std::max(xspread, (s[i] - s[0]).cwiseAbs().maxCoeff());
    if (std::abs(fs[n] - fs[0]) <= opt.ftol * (std::abs(fs[0]) + 1e-30) && xspread <= opt.xtol * std::max(1.0, s[0].cwiseAbs().maxCoeff())) {
      res.converged = true;
      break;
    }
    Vec c = Vec::Zero(n);
    for (int i = 0; i < n; ++i) c += s[i];
    c /= n;
    Vec xr = c + alpha * (c - s[n]);
    double fr = f(xr);
    ++res.evals;
    if (fr < fs[0]) {
      Vec xe = c + beta * (xr - c);
      double fe = f(xe);
      ++res.evals;
      if (fe < fr) {
        s[n] = xe;
        fs[n] = fe;
      } else {
        s[n] = xr;
        fs[n] = fr;
      }
    } else if (fr < fs[n - 1]) {
      s[n] = xr;
      fs[n] = fr;
    } else {
      bool outside = fr < fs[n];
      Vec xc = outside ? Vec(c + gamma * (xr - c)) : Vec(c - gamma * (c - s[n]));
      double fc = f(xc);
      ++res.evals;
      if (fc < (outside ? fr : fs[n])) {
        s[n] = xc;
        fs[n] = fc;
      } else {
        for (int i = 1; i <= n; ++i) {
          s[i] = s[0] + delta * (s[i] - s[0]);
          fs[i] = f(s[i]);
        }
        res.evals += n;
      }
    }
  }
  int best = static_cast<int>(std::min_element(fs.begin(), fs.end()) - fs.begin());
  res.x = s[best];
  res.f = fs[best];
  return res;
}

}  // namespace tensorial
