#include "projconst/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <thread>

#include "projconst/errors.hpp"
#include "projconst/kernels.hpp"
#include "projconst/rng.hpp"

namespace projconst {

namespace {

void check_config(const SearchConfig& cfg) {
  if (cfg.restarts < 1) throw Error("SearchConfig: restarts must be >= 1");
  if (!(cfg.tol > 0.0)) throw Error("SearchConfig: tol must be positive");
}

bool lex_less(const Vector& a, const Vector& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

double checked(const Objective& obj, const Vector& x) {
  double v = obj(x);
  if (!std::isfinite(v))
    throw NonFiniteObjective("objective returned a non-finite value");
  return v;
}

void normalize_euclid(Vector& x) {
  double n = std::sqrt(kern::active().nrm2sq(x.data(), x.size()));
  for (auto& c : x) c /= n;
}

struct RestartOutcome {
  Vector point;
  double value;
  SearchStatus status;
  std::size_t evals;
};

// golden-section minimization of phi over [lo, hi]
double golden_min(const std::function<double(double)>& phi, double lo,
                  double hi, double width, std::size_t& evals) {
  const double inv = 0.6180339887498948482;
  double a = lo, b = hi;
  double x1 = b - inv * (b - a);
  double x2 = a + inv * (b - a);
  double f1 = phi(x1), f2 = phi(x2);
  evals += 2;
  while (b - a > width) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv * (b - a);
      f1 = phi(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv * (b - a);
      f2 = phi(x2);
    }
    ++evals;
  }
  return f1 <= f2 ? x1 : x2;
}

RestartOutcome ascend_from(const Objective& obj, const GradientFn& grad,
                           std::uint64_t seed, std::size_t restart,
                           std::size_t dim, std::size_t max_iters,
                           double tol) {
  rng::Stream st(seed, restart + 1);
  Vector x;
  do {
    x = st.normal_vec(dim);
  } while (kern::active().nrm2sq(x.data(), dim) < 1e-12);
  normalize_euclid(x);

  std::size_t evals = 0;
  auto eval = [&](const Vector& v) {
    ++evals;
    return checked(obj, v);
  };

  double fx = eval(x);
  {
    Vector neg(dim);
    for (std::size_t i = 0; i < dim; ++i) neg[i] = -x[i];
    double fn = eval(neg);
    if (fn > fx) {
      x = std::move(neg);
      fx = fn;
    }
  }

  SearchStatus status = SearchStatus::IterLimit;
  double step = 0.5;
  for (std::size_t it = 0; it < max_iters; ++it) {
    Vector g = grad(x);
    double gx = kern::active().dot(g.data(), x.data(), dim);
    kern::active().axpy(-gx, x.data(), g.data(), dim);
    double gn = std::sqrt(kern::active().nrm2sq(g.data(), dim));
    if (gn < 1e-18) {
      status = SearchStatus::Converged;
      break;
    }
    bool moved = false;
    while (step >= tol) {
      Vector y = x;
      kern::active().axpy(step / gn, g.data(), y.data(), dim);
      normalize_euclid(y);
      double fy = eval(y);
      if (fy > fx) {
        x = std::move(y);
        fx = fy;
        step = std::min(step * 1.6, 2.0);
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) {
      status = SearchStatus::Converged;
      break;
    }
  }
  return {std::move(x), fx, status, evals};
}

}  // namespace

std::size_t thread_budget() {
  const char* env = std::getenv("PROJCONST_THREADS");
  if (!env) return 1;
  long v = std::strtol(env, nullptr, 10);
  if (v < 1) return 1;
  return static_cast<std::size_t>(v);
}

void parallel_for_index(std::size_t count,
                        const std::function<void(std::size_t)>& fn) {
  std::size_t workers = std::min(thread_budget(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < workers; ++t)
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(mu);
          if (!err) err = std::current_exception();
          return;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

SearchResult maximize_on_sphere(const Objective& objective,
                                const GradientFn& gradient,
                                std::size_t dimension,
                                const SearchConfig& config) {
  check_config(config);
  if (dimension == 0) throw Error("maximize_on_sphere: zero dimension");

  std::vector<RestartOutcome> outcomes(config.restarts);
  parallel_for_index(config.restarts, [&](std::size_t r) {
    outcomes[r] = ascend_from(objective, gradient, config.seed, r, dimension,
                              config.max_iters, config.tol);
  });

  SearchResult best;
  best.value = -std::numeric_limits<double>::infinity();
  for (const auto& o : outcomes) {
    best.evaluations += o.evals;
    bool take = o.value > best.value ||
                (o.value == best.value && lex_less(o.point, best.point));
    if (take) {
      best.point = o.point;
      best.value = o.value;
      best.status = o.status;
    }
  }
  return best;
}

namespace {

SearchResult minimize_impl(const Objective& objective, std::size_t dim,
                           const SearchConfig& config) {
  check_config(config);
  std::size_t evals = 0;
  auto eval = [&](const Vector& v) {
    ++evals;
    return checked(objective, v);
  };

  if (dim == 0) {
    Vector empty;
    double v = eval(empty);
    return {empty, v, SearchStatus::Converged, evals};
  }

  // coarse grid, expanded while the best point sits on the boundary
  std::size_t res = dim == 1 ? 65 : dim == 2 ? 17 : dim == 3 ? 9 : dim == 4 ? 5 : 3;
  double g = 8.0;
  Vector x(dim, 0.0);
  double fx = eval(x);
  for (;;) {
    std::vector<std::size_t> c(dim, 0);
    Vector pt(dim);
    Vector best_pt = x;
    double best_val = fx;
    bool done = false;
    while (!done) {
      for (std::size_t i = 0; i < dim; ++i)
        pt[i] = -g + 2.0 * g * static_cast<double>(c[i]) /
                        static_cast<double>(res - 1);
      double v = eval(pt);
      if (v < best_val) {
        best_val = v;
        best_pt = pt;
      }
      std::size_t i = 0;
      for (; i < dim; ++i) {
        if (++c[i] < res) break;
        c[i] = 0;
      }
      done = i == dim;
    }
    x = best_pt;
    fx = best_val;
    bool on_boundary = false;
    for (double xi : x)
      if (std::fabs(std::fabs(xi) - g) < 1e-12) on_boundary = true;
    if (!on_boundary || g > 1e9) break;
    g *= 4.0;
  }

  double width = std::max(1e-15, config.tol * 1e-5);
  std::size_t max_sweeps = std::max<std::size_t>(2, config.max_iters / 50);
  SearchStatus status = SearchStatus::IterLimit;
  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    double before = fx;
    for (std::size_t i = 0; i < dim; ++i) {
      auto phi = [&](double t) {
        Vector y = x;
        y[i] += t;
        return checked(objective, y);
      };
      // bracket a descent interval around 0
      double h = std::max(1e-3, 0.05 * (1.0 + std::fabs(x[i])));
      double f0 = fx;
      double fp = phi(h), fm = phi(-h);
      evals += 2;
      double lo = -h, hi = h;
      if (fp < f0 || fm < f0) {
        double dir = fp < fm ? 1.0 : -1.0;
        double t_prev = 0.0, t_cur = dir * h;
        double f_cur = dir > 0 ? fp : fm;
        for (;;) {
          double t_next = t_cur * 2.0;
          double f_next = phi(t_next);
          ++evals;
          if (f_next >= f_cur || std::fabs(t_next) > 1e12) {
            lo = std::min(t_prev, t_next);
            hi = std::max(t_prev, t_next);
            break;
          }
          t_prev = t_cur;
          t_cur = t_next;
          f_cur = f_next;
        }
      }
      double t_best =
          golden_min(phi, lo, hi, width * std::max(1.0, std::fabs(x[i])),
                     evals);
      double f_best = phi(t_best);
      ++evals;
      if (f_best < fx) {
        x[i] += t_best;
        fx = f_best;
      }
    }
    if (before - fx <= config.tol * (1.0 + std::fabs(fx))) {
      status = SearchStatus::Converged;
      break;
    }
  }
  return {std::move(x), fx, status, evals};
}

}  // namespace

SearchResult minimize_convex_lowdim(const Objective& objective,
                                    std::size_t dimension,
                                    const SearchConfig& config) {
  if (dimension > 4) throw Error("minimize_convex_lowdim: dimension above 4");
  return minimize_impl(objective, dimension, config);
}

SearchResult minimize_convex_nd(const Objective& objective,
                                std::size_t dimension,
                                const SearchConfig& config) {
  return minimize_impl(objective, dimension, config);
}

FalsifyResult falsify_inequality(
    const Objective& residual,
    const std::vector<std::pair<double, double>>& sample_space,
    const SearchConfig& config) {
  check_config(config);
  std::size_t dim = sample_space.size();
  FalsifyResult out;
  out.min_residual = std::numeric_limits<double>::infinity();

  auto eval = [&](const Vector& v) {
    ++out.evaluations;
    double r = residual(v);
    if (!std::isfinite(r)) return std::numeric_limits<double>::infinity();
    if (r < out.min_residual) {
      out.min_residual = r;
      out.min_point = v;
    }
    return r;
  };

  for (std::size_t r = 0; r < config.restarts; ++r) {
    rng::Stream st(config.seed, r + 1);
    Vector x(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      auto [lo, hi] = sample_space[i];
      x[i] = r == 0 ? 0.5 * (lo + hi) : st.uniform(lo, hi);
    }
    double fx = eval(x);
    Vector step(dim);
    for (std::size_t i = 0; i < dim; ++i)
      step[i] = 0.25 * (sample_space[i].second - sample_space[i].first);
    for (std::size_t it = 0; it < config.max_iters; ++it) {
      std::size_t best_i = dim;
      double best_v = fx;
      double best_x = 0.0;
      for (std::size_t i = 0; i < dim; ++i) {
        for (double s : {step[i], -step[i]}) {
          double cand = std::clamp(x[i] + s, sample_space[i].first,
                                   sample_space[i].second);
          if (cand == x[i]) continue;
          Vector y = x;
          y[i] = cand;
          double fy = eval(y);
          if (fy < best_v) {
            best_v = fy;
            best_i = i;
            best_x = cand;
          }
        }
      }
      if (best_i < dim) {
        x[best_i] = best_x;
        fx = best_v;
        continue;
      }
      double widest = 0.0;
      for (std::size_t i = 0; i < dim; ++i) {
        step[i] *= 0.5;
        double w = sample_space[i].second - sample_space[i].first;
        if (w > 0.0) widest = std::max(widest, step[i] / w);
      }
      if (widest < config.tol) break;
    }
  }

  if (out.min_residual < -config.tol) out.counterexample = out.min_point;
  return out;
}

}  // namespace projconst
