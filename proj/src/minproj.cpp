#include "projconst/minproj.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "projconst/errors.hpp"
#include "projconst/kernels.hpp"
#include "projconst/linalg.hpp"
#include "projconst/rng.hpp"

namespace projconst {

namespace {

double vdot(const Vector& a, const Vector& b) {
  return kern::active().dot(a.data(), b.data(), a.size());
}

double ipow(double x, int e) {
  double r = 1.0;
  double b = x;
  for (int k = e; k > 0; k >>= 1) {
    if (k & 1) r *= b;
    b *= b;
  }
  return r;
}

std::string vec_text(const Vector& v) {
  std::string s = "(";
  char buf[40];
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", v[i]);
    if (i) s += ", ";
    s += buf;
  }
  return s + ")";
}

struct InnerMax {
  double value = 0.0;
  Vector point;
  std::size_t evaluations = 0;
};

// best found value of ||x - f(x) w|| / ||x|| over the sphere; the kernel
// basis vectors are appended as candidates so the result never drops below
// the quotient value 1 they realize
InnerMax inner_estimate(const FunctionalFamily& sp, const Vector& fe,
                        const Vector& w, const std::vector<Vector>& kernel,
                        const SearchConfig& cfg) {
  const auto& k = kern::active();
  auto objective = [&](const Vector& x) {
    double fx = k.dot(fe.data(), x.data(), x.size());
    Vector u = x;
    k.axpy(-fx, w.data(), u.data(), u.size());
    return norm_eval(sp, u) / norm_eval(sp, x);
  };
  auto gradient = [&](const Vector& x) {
    double fx = k.dot(fe.data(), x.data(), x.size());
    Vector u = x;
    k.axpy(-fx, w.data(), u.data(), u.size());
    double nu = norm_eval(sp, u);
    double nx = norm_eval(sp, x);
    Vector g(sp.n, 0.0);
    if (nu > 0.0) {
      Vector gu = norm_gradient(sp, u);
      double wgu = k.dot(w.data(), gu.data(), sp.n);
      for (std::size_t i = 0; i < sp.n; ++i) g[i] = (gu[i] - fe[i] * wgu) / nx;
    }
    Vector gx = norm_gradient(sp, x);
    double ratio = nu / (nx * nx);
    for (std::size_t i = 0; i < sp.n; ++i) g[i] -= ratio * gx[i];
    return g;
  };
  SearchResult r = maximize_on_sphere(objective, gradient, sp.n, cfg);
  InnerMax out{r.value, r.point, r.evaluations};
  for (const auto& b : kernel) {
    double v = objective(b);
    ++out.evaluations;
    if (v > out.value) {
      out.value = v;
      out.point = b;
    }
  }
  return out;
}

// max-function subgradient: at the inner argmax x*, the value depends on w
// only through u = x* - f(x*) w
Vector w_subgradient(const FunctionalFamily& sp, const Vector& fe,
                     const Vector& w, const Vector& xstar) {
  const auto& k = kern::active();
  double fx = k.dot(fe.data(), xstar.data(), sp.n);
  Vector u = xstar;
  k.axpy(-fx, w.data(), u.data(), u.size());
  double nu = norm_eval(sp, u);
  double nx = norm_eval(sp, xstar);
  Vector g(sp.n, 0.0);
  if (nu == 0.0) return g;
  Vector gu = norm_gradient(sp, u);
  double scale = -fx / nx;
  for (std::size_t i = 0; i < sp.n; ++i) g[i] = scale * gu[i];
  return g;
}

void check_projection(const FunctionalFamily& sp, const Projection& proj,
                      const char* who) {
  if (proj.f.f.size() != sp.n || proj.w.size() != sp.n)
    throw DimensionMismatch(std::string(who) + ": length mismatch");
  double fw = vdot(proj.f.f, proj.w);
  if (std::abs(fw - 1.0) > 1e-8)
    throw Error(std::string(who) + ": f(w) must equal 1, got " +
                std::to_string(fw));
}

struct RestartSlot {
  Vector xi;
  double value = std::numeric_limits<double>::infinity();
  SearchStatus status = SearchStatus::Converged;
  std::size_t evaluations = 0;
};

double golden_min_1d(const std::function<double(double)>& h, double lo,
                     double hi, double width, double* arg) {
  const double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = h(c), fd = h(d);
  while (b - a > width) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = h(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = h(d);
    }
  }
  double mid = 0.5 * (a + b);
  double fm = h(mid);
  *arg = mid;
  return fm;
}

}  // namespace

Projection make_projection(const FunctionalFamily& sp, Hyperplane f,
                           Vector w) {
  if (f.f.size() != sp.n || w.size() != sp.n)
    throw DimensionMismatch("make_projection: length mismatch");
  double fw = vdot(f.f, w);
  double scale = kern::active().max_abs(w.data(), sp.n);
  if (scale == 0.0 || std::abs(fw) < 1e-13 * std::max(1.0, scale))
    throw ZeroVector();
  if (std::abs(fw - 1.0) > 1e-10)
    for (auto& c : w) c /= fw;
  return {std::move(f), std::move(w)};
}

double projection_norm_estimate(const FunctionalFamily& sp,
                                const Projection& proj) {
  return projection_norm_estimate(sp, proj, SearchConfig{});
}

double projection_norm_estimate(const FunctionalFamily& sp,
                                const Projection& proj,
                                const SearchConfig& config) {
  check_projection(sp, proj, "projection_norm_estimate");
  auto kernel = null_space_basis(proj.f.f);
  return inner_estimate(sp, proj.f.f, proj.w, kernel, config).value;
}

double projection_crude_upper(const FunctionalFamily& sp,
                              const Projection& proj) {
  check_projection(sp, proj, "projection_crude_upper");
  return 1.0 + dual_norm(sp, proj.f.f) * norm_eval(sp, proj.w);
}

MinProjResult minimal_projection_search(const FunctionalFamily& sp,
                                        const Hyperplane& f,
                                        const SearchConfig& config) {
  const Vector& fe = f.f;
  if (fe.size() != sp.n)
    throw DimensionMismatch("minimal_projection_search: length mismatch");
  double fee = vdot(fe, fe);
  if (fee == 0.0) throw ZeroVector();
  Vector w0(sp.n);
  for (std::size_t i = 0; i < sp.n; ++i) w0[i] = fe[i] / fee;
  auto basis = null_space_basis(fe);
  std::size_t kdim = basis.size();

  SearchConfig inner;
  inner.restarts = 6;
  inner.max_iters = 200;
  inner.tol = std::min(config.tol, 1e-9);

  auto expand = [&](const Vector& xi) {
    Vector w = w0;
    for (std::size_t c = 0; c < kdim; ++c)
      kern::active().axpy(xi[c], basis[c].data(), w.data(), sp.n);
    return w;
  };

  std::size_t restarts = std::max<std::size_t>(1, config.restarts);
  std::vector<RestartSlot> slots(restarts);
  parallel_for_index(restarts, [&](std::size_t s) {
    RestartSlot& slot = slots[s];
    SearchConfig icfg = inner;
    icfg.seed = rng::keyed(config.seed, 77, s);
    rng::Stream st(config.seed, 9100 + s);
    Vector xi(kdim, 0.0);
    if (s > 0)
      for (auto& c : xi) c = 0.7 * st.normal();

    auto phi_full = [&](const Vector& x) {
      ++slot.evaluations;
      return inner_estimate(sp, fe, expand(x), basis, icfg);
    };
    auto phi = [&](const Vector& x) { return phi_full(x).value; };

    slot.status = SearchStatus::IterLimit;
    double step = 0.25;
    InnerMax cur = phi_full(xi);
    for (std::size_t t = 0; t < config.max_iters; ++t) {
      Vector w = expand(xi);
      Vector gw = w_subgradient(sp, fe, w, cur.point);
      Vector g(kdim, 0.0);
      double gn2 = 0.0;
      for (std::size_t c = 0; c < kdim; ++c) {
        g[c] = vdot(basis[c], gw);
        gn2 += g[c] * g[c];
      }
      double gn = std::sqrt(gn2);
      if (gn < 1e-13) {
        slot.status = SearchStatus::Converged;
        break;
      }
      bool moved = false;
      while (step >= 1e-9) {
        Vector trial = xi;
        for (std::size_t c = 0; c < kdim; ++c) trial[c] -= step * g[c] / gn;
        InnerMax tv = phi_full(trial);
        if (tv.value < cur.value - 1e-15) {
          xi = std::move(trial);
          cur = std::move(tv);
          step = std::min(step * 1.5, 0.5);
          moved = true;
          break;
        }
        step *= 0.4;
      }
      if (!moved) {
        slot.status = SearchStatus::Converged;
        break;
      }
    }

    // derivative-free sweeps to finish through the subgradient kinks
    for (int sweep = 0; sweep < 2; ++sweep)
      for (std::size_t c = 0; c < kdim; ++c) {
        auto h = [&](double d) {
          Vector t = xi;
          t[c] += d;
          return phi(t);
        };
        double dstar = 0.0;
        double hv = golden_min_1d(h, -0.25, 0.25, 1e-9, &dstar);
        if (hv < cur.value) {
          xi[c] += dstar;
          cur.value = hv;
        }
      }

    slot.xi = std::move(xi);
    slot.value = cur.value;
  });

  std::size_t best = 0;
  MinProjResult out;
  out.trace.reserve(restarts);
  for (std::size_t s = 0; s < restarts; ++s) {
    out.trace.push_back(
        {s, slots[s].value, slots[s].status, slots[s].evaluations});
    if (slots[s].value < slots[best].value) best = s;
  }

  Vector wbest = expand(slots[best].xi);
  out.projection = Projection{f, wbest};
  auto kernel = null_space_basis(fe);
  double final_value =
      inner_estimate(sp, fe, wbest, kernel, config).value;
  out.norm_estimate = std::max(1.0, final_value);
  out.crude_upper = 1.0 + dual_norm(sp, fe) * norm_eval(sp, wbest);
  return out;
}

SmoothnessReport smoothness_gap_check(const FunctionalFamily& sp,
                                      const MinProjResult& result,
                                      std::size_t sample_count) {
  SearchConfig cfg;
  cfg.restarts = 8;
  cfg.max_iters = 120;
  cfg.tol = 1e-9;
  return smoothness_gap_check(sp, result, sample_count, cfg);
}

SmoothnessReport smoothness_gap_check(const FunctionalFamily& sp,
                                      const MinProjResult& result,
                                      std::size_t sample_count,
                                      const SearchConfig& config) {
  check_projection(sp, result.projection, "smoothness_gap_check");
  const Vector& fe = result.projection.f.f;
  const Vector& w = result.projection.w;
  double eps = std::max(0.0, result.norm_estimate - 1.0);
  double p = static_cast<double>(sp.p);

  SmoothnessReport rep;
  rep.eps = eps;
  rep.t0 = 4.0 * std::sqrt(eps * p / (2.0 + 2.0 * eps));
  rep.bound_lemma = rep.t0 * (2.0 + eps) + 1e-7;
  rep.bound_sqrt = 8.0 * std::sqrt(eps * p) + 1e-7;
  rep.samples = sample_count;
  rep.w_norm = norm_eval(sp, w);

  if (rep.w_norm > 2.0 + eps + 1e-7)
    throw ViolationFound("smoothness_gap_check: ||w|| = " +
                         std::to_string(rep.w_norm) + " exceeds 2 + eps");
  if (rep.w_norm >= 4.0)
    throw ViolationFound("smoothness_gap_check: ||w|| = " +
                         std::to_string(rep.w_norm) + " reaches 4");

  auto basis = null_space_basis(fe);
  std::size_t kdim = basis.size();
  auto gap_at = [&](const Vector& coeffs) {
    Vector ye(sp.n, 0.0);
    for (std::size_t c = 0; c < kdim; ++c)
      kern::active().axpy(coeffs[c], basis[c].data(), ye.data(), sp.n);
    double ny = norm_eval(sp, ye);
    Vector y = ye;
    for (auto& v : y) v /= ny;
    return std::abs(support_eval(sp, supporting_functional(sp, y), w));
  };

  for (std::size_t j = 0; j < sample_count; ++j) {
    rng::Stream st(config.seed, 5300 + j);
    Vector coeffs(kdim, 0.0);
    double e2 = 0.0;
    do {
      e2 = 0.0;
      for (auto& c : coeffs) {
        c = st.normal();
        e2 += c * c;
      }
    } while (e2 < 1e-18);
    double val = gap_at(coeffs);
    rep.max_abs_fyw = std::max(rep.max_abs_fyw, val);
    if (val > rep.bound_lemma || val > rep.bound_sqrt) {
      Vector ye(sp.n, 0.0);
      for (std::size_t c = 0; c < kdim; ++c)
        kern::active().axpy(coeffs[c], basis[c].data(), ye.data(), sp.n);
      throw ViolationFound("smoothness_gap_check: |f_y(w)| = " +
                           std::to_string(val) + " breaks the bound at y = " +
                           vec_text(ye));
    }
  }

  double floor = std::min(rep.bound_lemma, rep.bound_sqrt);
  auto residual = [&](const Vector& coeffs) {
    double e2 = kern::active().nrm2sq(coeffs.data(), coeffs.size());
    if (e2 < 1e-16) return 1.0;
    return floor - gap_at(coeffs);
  };
  std::vector<std::pair<double, double>> box(kdim, {-1.0, 1.0});
  FalsifyResult fr = falsify_inequality(residual, box, config);
  rep.falsify_min_residual = fr.min_residual;
  if (fr.counterexample)
    throw ViolationFound(
        "smoothness_gap_check: worst-case search drove |f_y(w)| above the "
        "bound, kernel coordinates " +
        vec_text(*fr.counterexample));

  rep.ok = true;
  return rep;
}

ReplayReport proof_chain_replay(const FunctionalFamily& sp,
                                const Hyperplane& f,
                                const MinProjResult& result, const Vector& y,
                                const Vector& z) {
  if (f.f.size() != sp.n || y.size() != sp.n || z.size() != sp.n)
    throw DimensionMismatch("proof_chain_replay: length mismatch");
  check_projection(sp, result.projection, "proof_chain_replay");
  double ny = norm_eval(sp, y);
  double nz = norm_eval(sp, z);
  Vector yu = y, zu = z;
  for (auto& v : yu) v /= ny;
  for (auto& v : zu) v /= nz;

  Vector fy = family_apply(sp, yu);
  Vector fz = family_apply(sp, zu);
  Vector fw = family_apply(sp, result.projection.w);
  for (std::size_t i = 0; i < sp.m; ++i)
    if (std::abs(fy[i]) <= 1e-12)
      throw DegenerateY("proof_chain_replay: f_" + std::to_string(i) +
                        "(y) vanishes, nodes undefined");

  int d = sp.two_p() - 1;
  ReplayReport rep;
  rep.nodes.resize(sp.m);
  rep.v.resize(sp.m);
  for (std::size_t i = 0; i < sp.m; ++i) {
    rep.nodes[i] = fz[i] / fy[i];
    rep.v[i] = ipow(fy[i], d) * fw[i];
  }

  auto p_at = [&](double t) {
    double s = 0.0;
    for (std::size_t i = 0; i < sp.m; ++i)
      s += ipow(fy[i] + t * fz[i], d) * fw[i];
    return s;
  };
  const int grid = 4000;
  for (int j = 0; j <= grid; ++j) {
    double t = -1.0 + 2.0 * j / grid;
    rep.max_abs_p = std::max(rep.max_abs_p, std::abs(p_at(t)));
  }

  // binomial expansion of sum_i (f_i(y) + t f_i(z))^d f_i(w); derivatives
  // read off the coefficients exactly
  std::vector<double> binom(d + 1, 0.0);
  binom[0] = 1.0;
  for (int r = 1; r <= d; ++r)
    for (int j = r; j >= 1; --j) binom[j] += binom[j - 1];
  rep.derivatives.assign(d + 1, 0.0);
  double fact = 1.0;
  for (int k = 0; k <= d; ++k) {
    double ck = 0.0;
    for (std::size_t i = 0; i < sp.m; ++i)
      ck += binom[k] * ipow(fy[i], d - k) * ipow(fz[i], k) * fw[i];
    if (k > 0) fact *= k;
    rep.derivatives[k] = fact * ck;
  }

  rep.markov_bounds.assign(d + 1, 0.0);
  double factor = ipow(2.0, sp.two_p());
  for (int k = 0; k <= d; ++k) {
    if (k > 0) {
      double step = static_cast<double>(sp.two_p() - k);
      factor *= step * step;
    }
    rep.markov_bounds[k] = factor * rep.max_abs_p;
  }
  std::size_t klim = std::min<std::size_t>(
      static_cast<std::size_t>(d), sp.m >= 2 ? sp.m - 2 : 0);
  for (std::size_t k = 0; k <= klim; ++k)
    if (std::abs(rep.derivatives[k]) >
        rep.markov_bounds[k] * (1.0 + 1e-9) + 1e-12)
      rep.markov_ok = false;

  std::vector<double> nodes(rep.nodes.begin(), rep.nodes.end());
  rep.inverse_bound = vandermonde_inverse_norm_bound(nodes);
  if (sp.m <= 12) {
    MatrixDense a = vandermonde_matrix(nodes);
    try {
      rep.inverse_exact = exact_inf_norm_inverse(a);
    } catch (const Singular&) {
      rep.inverse_exact = 0.0;
    }
    if (rep.inverse_exact > 0.0) {
      rep.inverse_ok =
          rep.inverse_exact <= rep.inverse_bound * (1.0 + 1e-9) + 1e-12;
      Vector av(sp.m, 0.0);
      for (std::size_t r = 0; r < sp.m; ++r)
        for (std::size_t c = 0; c < sp.m; ++c)
          av[r] += a.at(r, c) * rep.v[c];
      double ainf = kern::active().max_abs(av.data(), sp.m);
      double vinf = kern::active().max_abs(rep.v.data(), sp.m);
      rep.vector_bound_ok =
          ainf + 1e-9 * std::max(1.0, vinf) >= vinf / rep.inverse_exact;
    }
  }
  return rep;
}

}  // namespace projconst
