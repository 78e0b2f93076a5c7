#pragma once

// Independent brute-force evaluations used as test oracles. Plain loops and
// long double accumulation; nothing here touches the cube index or ExactSum.

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "varlex/domain.hpp"
#include "varlex/fields.hpp"

namespace oracle {

using varlex::DiscreteDomain;

inline long double linf(const DiscreteDomain& d, std::size_t a, std::size_t b) {
  long double m = 0;
  for (std::size_t k = 0; k < d.ambient_dim(); ++k) {
    m = std::max(m, std::fabs(static_cast<long double>(d.coords(a)[k]) - d.coords(b)[k]));
  }
  return m;
}

inline long double l2(const DiscreteDomain& d, std::size_t a, std::size_t b) {
  long double s = 0;
  for (std::size_t k = 0; k < d.ambient_dim(); ++k) {
    const long double t = static_cast<long double>(d.coords(a)[k]) - d.coords(b)[k];
    s += t * t;
  }
  return std::sqrt(s);
}

// Distinct linf distances from atom c, ascending.
inline std::vector<long double> critical_half_sides(const DiscreteDomain& d, std::size_t c) {
  std::vector<long double> r;
  for (std::size_t y = 0; y < d.size(); ++y) {
    r.push_back(linf(d, c, y));
  }
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
  return r;
}

inline long double modular(const std::vector<double>& f, const std::vector<double>& p,
                           const std::vector<double>& m, long double lambda) {
  long double s = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    s += std::pow(std::fabs(static_cast<long double>(f[i])) / lambda,
                  static_cast<long double>(p[i])) *
         m[i];
  }
  return s;
}

// Luxemburg norm by repeated dense scans: a coarse log-spaced sweep locates
// the crossing of modular(f / lambda) = 1, then each refinement sweeps the
// bracket linearly with 1000 points.
inline double dense_scan_norm(const std::vector<double>& f, const std::vector<double>& p,
                              const std::vector<double>& m) {
  bool any = false;
  for (const double v : f) {
    any = any || v != 0.0;
  }
  if (!any) {
    return 0.0;
  }
  long double lo = 0, hi = 0;
  long double prev = std::exp(-80.0L);
  for (int k = 0; k <= 16000; ++k) {
    const long double lam = std::exp(-80.0L + 0.01L * k);
    if (modular(f, p, m, lam) <= 1.0L) {
      lo = prev;
      hi = lam;
      break;
    }
    prev = lam;
  }
  for (int round = 0; round < 4; ++round) {
    const long double step = (hi - lo) / 1000.0L;
    long double a = lo;
    for (int k = 1; k <= 1000; ++k) {
      const long double lam = lo + step * k;
      if (modular(f, p, m, lam) <= 1.0L) {
        hi = lam;
        lo = a;
        break;
      }
      a = lam;
    }
  }
  return static_cast<double>(hi);
}

inline long double cube_mass(const DiscreteDomain& d, std::size_t c, long double half) {
  long double s = 0;
  for (std::size_t y = 0; y < d.size(); ++y) {
    if (linf(d, c, y) <= half) {
      s += d.mass(y);
    }
  }
  return s;
}

// sup over every critical cube of mu(Q)^(alpha/beta - 1) * integral_Q |f|.
inline std::vector<long double> maximal(const DiscreteDomain& d, const std::vector<double>& f,
                                        long double alpha, long double beta) {
  std::vector<long double> out(d.size());
  for (std::size_t c = 0; c < d.size(); ++c) {
    long double best = -1;
    for (const long double h : critical_half_sides(d, c)) {
      long double in = 0, mu = 0;
      for (std::size_t y = 0; y < d.size(); ++y) {
        if (linf(d, c, y) <= h) {
          in += std::fabs(static_cast<long double>(f[y])) * d.mass(y);
          mu += d.mass(y);
        }
      }
      best = std::max(best, in * std::pow(mu, alpha / beta - 1.0L));
    }
    out[c] = best;
  }
  return out;
}

inline std::vector<long double> fractional_integral(const DiscreteDomain& d,
                                                    const std::vector<double>& f,
                                                    long double alpha) {
  std::vector<long double> out(d.size());
  for (std::size_t c = 0; c < d.size(); ++c) {
    long double s = 0;
    for (std::size_t y = 0; y < d.size(); ++y) {
      if (y == c) {
        continue;
      }
      const long double e = l2(d, c, y);
      s += f[y] * std::pow(e, alpha) * d.mass(y) / cube_mass(d, c, e);
    }
    out[c] = s;
  }
  return out;
}

// max over critical cubes of avg(w) * avg(w^(-1/(s-1)))^(s-1).
inline long double muckenhoupt(const DiscreteDomain& d, const std::vector<double>& w,
                               long double s) {
  long double best = 0;
  for (std::size_t c = 0; c < d.size(); ++c) {
    for (const long double h : critical_half_sides(d, c)) {
      long double a = 0, b = 0, mu = 0;
      for (std::size_t y = 0; y < d.size(); ++y) {
        if (linf(d, c, y) <= h) {
          a += w[y] * d.mass(y);
          b += std::pow(static_cast<long double>(w[y]), -1.0L / (s - 1.0L)) * d.mass(y);
          mu += d.mass(y);
        }
      }
      best = std::max(best, (a / mu) * std::pow(b / mu, s - 1.0L));
    }
  }
  return best;
}

inline long double a1(const DiscreteDomain& d, const std::vector<double>& w) {
  long double best = 0;
  for (std::size_t c = 0; c < d.size(); ++c) {
    for (const long double h : critical_half_sides(d, c)) {
      long double a = 0, mu = 0, lo = INFINITY;
      for (std::size_t y = 0; y < d.size(); ++y) {
        if (linf(d, c, y) <= h) {
          a += w[y] * d.mass(y);
          mu += d.mass(y);
          lo = std::min(lo, static_cast<long double>(w[y]));
        }
      }
      best = std::max(best, a / mu / lo);
    }
  }
  return best;
}

inline bool close(long double a, long double b, long double rel) {
  return std::fabs(a - b) <= rel * std::max(std::fabs(a), std::fabs(b));
}

}  // namespace oracle
