#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "projconst/errors.hpp"
#include "projconst/linalg.hpp"
#include "projconst/minproj.hpp"
#include "projconst/rng.hpp"

using namespace projconst;

namespace {

FunctionalFamily corollary4() {
  MatrixDense f(6, 4);
  for (int i = 0; i < 4; ++i) f.at(i, i) = 1.0;
  for (int j = 0; j < 4; ++j) {
    f.at(4, j) = 1.0;
    f.at(5, j) = (j + 1) / 4.0;
  }
  return FunctionalFamily(3, std::move(f));
}

FunctionalFamily corollary5() {
  MatrixDense f(7, 5);
  for (int i = 0; i < 5; ++i) f.at(i, i) = 1.0;
  for (int j = 0; j < 5; ++j) {
    f.at(5, j) = 1.0;
    f.at(6, j) = (j + 1) / 5.0;
  }
  return FunctionalFamily(4, std::move(f));
}

FunctionalFamily identity_family(std::size_t n, int p = 1) {
  return FunctionalFamily(p, MatrixDense::identity(n));
}

double quotient(const FunctionalFamily& sp, const Vector& fe, const Vector& w,
                const Vector& x) {
  double fx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) fx += fe[i] * x[i];
  Vector u = x;
  for (std::size_t i = 0; i < x.size(); ++i) u[i] -= fx * w[i];
  return norm_eval(sp, u) / norm_eval(sp, x);
}

// brute-force reference for the projection norm: a large random sample of
// directions followed by a compass walk from the best few
double grid_polish_oracle(const FunctionalFamily& sp, const Vector& fe,
                          const Vector& w) {
  rng::Stream st(987654);
  const std::size_t trials = 100000;
  std::vector<std::pair<double, Vector>> top;
  for (std::size_t j = 0; j < trials; ++j) {
    Vector x = st.normal_vec(sp.n);
    double e2 = 0.0;
    for (double c : x) e2 += c * c;
    if (e2 < 1e-12) continue;
    double v = quotient(sp, fe, w, x);
    top.emplace_back(v, x);
    std::sort(top.begin(), top.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    if (top.size() > 5) top.pop_back();
  }
  double best = 0.0;
  for (auto& [v0, x] : top) {
    double v = v0;
    double step = 0.05;
    while (step > 1e-10) {
      bool moved = false;
      for (std::size_t i = 0; i < sp.n && !moved; ++i)
        for (double s : {step, -step}) {
          Vector y = x;
          y[i] += s;
          double vy = quotient(sp, fe, w, y);
          if (vy > v) {
            v = vy;
            x = y;
            moved = true;
            break;
          }
        }
      if (!moved) step *= 0.5;
    }
    best = std::max(best, v);
  }
  return best;
}

Vector random_w(const FunctionalFamily& sp, const Vector& fe,
                std::uint64_t seed) {
  rng::Stream st(seed);
  for (;;) {
    Vector w = st.normal_vec(sp.n);
    double fw = 0.0;
    for (std::size_t i = 0; i < sp.n; ++i) fw += fe[i] * w[i];
    if (std::abs(fw) < 0.2) continue;
    for (auto& c : w) c /= fw;
    return w;
  }
}

SearchConfig eval_cfg(std::uint64_t seed = 1) {
  SearchConfig cfg;
  cfg.seed = seed;
  cfg.restarts = 24;
  cfg.max_iters = 300;
  cfg.tol = 1e-10;
  return cfg;
}

SearchConfig search_cfg(std::uint64_t seed = 1) {
  SearchConfig cfg;
  cfg.seed = seed;
  cfg.restarts = 4;
  cfg.max_iters = 60;
  cfg.tol = 1e-9;
  return cfg;
}

}  // namespace

TEST_CASE("orthogonal projection in the euclidean family has norm one") {
  auto sp = identity_family(3, 1);
  Vector e1{1.0, 0.0, 0.0};
  auto proj = make_projection(sp, make_hyperplane(sp, e1), e1);
  double est = projection_norm_estimate(sp, proj, eval_cfg());
  CHECK(est == doctest::Approx(1.0).epsilon(1e-9));
  double crude = projection_crude_upper(sp, proj);
  CHECK(crude == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(est <= crude + 1e-9);
}

TEST_CASE("estimate never drops below one") {
  auto sp = corollary4();
  Vector fe{0.5, -0.25, 1.0, 0.125};
  auto f = make_hyperplane(sp, fe);
  SearchConfig cfg = eval_cfg(3);
  cfg.restarts = 8;
  for (std::uint64_t s = 0; s < 5; ++s) {
    auto proj = make_projection(sp, f, random_w(sp, f.f, 100 + s));
    double est = projection_norm_estimate(sp, proj, cfg);
    CHECK(est >= 1.0 - 1e-10);
    CHECK(est <= projection_crude_upper(sp, proj) + 1e-9);
  }
}

TEST_CASE("estimate matches the dense grid oracle") {
  auto sp = corollary4();
  auto f = make_hyperplane(sp, Vector{1.0, 0.5, -0.75, 0.25});
  Vector w = random_w(sp, f.f, 9);
  auto proj = make_projection(sp, f, w);
  SearchConfig cfg = eval_cfg(2);
  cfg.restarts = 48;
  double est = projection_norm_estimate(sp, proj, cfg);
  double oracle = grid_polish_oracle(sp, f.f, proj.w);
  CHECK(est == doctest::Approx(oracle).epsilon(1e-5));
}

TEST_CASE("rescaling in make_projection and degenerate w rejection") {
  auto sp = identity_family(4, 2);
  Vector fe{1.0, 1.0, 0.0, 0.0};
  auto f = make_hyperplane(sp, fe);
  Vector w{3.0, 1.0, 2.0, 0.0};
  auto proj = make_projection(sp, f, w);
  double fw = 0.0;
  for (std::size_t i = 0; i < 4; ++i) fw += f.f[i] * proj.w[i];
  CHECK(fw == doctest::Approx(1.0).epsilon(1e-12));
  Vector bad{1.0, -1.0, 5.0, 0.0};
  CHECK_THROWS_AS(make_projection(sp, f, bad), ZeroVector);
  CHECK_THROWS_AS(make_projection(sp, f, Vector{1.0, 2.0}),
                  DimensionMismatch);
}

TEST_CASE("minimal search on the euclidean family returns one") {
  auto sp = identity_family(3, 1);
  auto f = make_hyperplane(sp, Vector{2.0, -1.0, 0.5});
  auto res = minimal_projection_search(sp, f, search_cfg(5));
  CHECK(res.norm_estimate >= 1.0);
  CHECK(res.norm_estimate <= 1.0 + 1e-6);
  CHECK(res.norm_estimate <= res.crude_upper + 1e-9);
  CHECK(res.trace.size() == 4);
  for (const auto& t : res.trace) {
    CHECK(t.evaluations > 0);
    CHECK(t.value >= 1.0 - 1e-10);
  }
}

TEST_CASE("iteration cap is recorded in the trace") {
  auto sp = identity_family(3, 1);
  auto f = make_hyperplane(sp, Vector{1.0, 1.0, 1.0});
  SearchConfig cfg = search_cfg(6);
  cfg.max_iters = 1;
  auto res = minimal_projection_search(sp, f, cfg);
  bool saw_limit = false;
  for (const auto& t : res.trace)
    saw_limit = saw_limit || t.status == SearchStatus::IterLimit;
  CHECK(saw_limit);
}

TEST_CASE("minimality sandwich against supplied candidates") {
  auto sp = corollary4();
  Vector fe(sp.F.row(0), sp.F.row(0) + 4);
  auto f = make_hyperplane(sp, fe);
  SearchConfig cfg = search_cfg(7);
  auto res = minimal_projection_search(sp, f, cfg);
  for (std::uint64_t s = 0; s < 3; ++s) {
    auto cand = make_projection(sp, f, random_w(sp, f.f, 500 + s));
    double at = projection_norm_estimate(sp, cand, cfg);
    CHECK(res.norm_estimate <= at + 1e-8);
  }
  double fee = 0.0;
  for (double c : f.f) fee += c * c;
  Vector w0 = f.f;
  for (auto& c : w0) c /= fee;
  double at0 =
      projection_norm_estimate(sp, make_projection(sp, f, w0), cfg);
  CHECK(res.norm_estimate <= at0 + 1e-8);
}

TEST_CASE("no projection along the first functional reaches norm one") {
  auto sp = corollary4();
  Vector fe(sp.F.row(0), sp.F.row(0) + 4);
  auto f = make_hyperplane(sp, fe);
  auto res = minimal_projection_search(sp, f, search_cfg(8));
  CHECK(res.norm_estimate > 1.0 + 1e-8);

  // independent sweep: a coarse grid over the affine slice {f(w) = 1};
  // every grid point is evaluated with its own sphere search, and the
  // reported values are themselves lower bounds, so a grid minimum above
  // the threshold cannot be an artifact of the outer search
  auto basis = null_space_basis(f.f);
  double fee = 0.0;
  for (double c : f.f) fee += c * c;
  Vector w0 = f.f;
  for (auto& c : w0) c /= fee;
  SearchConfig lean;
  lean.seed = 17;
  lean.restarts = 3;
  lean.max_iters = 80;
  lean.tol = 1e-9;
  double grid_min = std::numeric_limits<double>::infinity();
  const int half = 6;
  const double step = 0.25;
  for (int a = -half; a <= half; ++a)
    for (int b = -half; b <= half; ++b)
      for (int c = -half; c <= half; ++c) {
        Vector w = w0;
        for (std::size_t i = 0; i < 4; ++i)
          w[i] += a * step * basis[0][i] + b * step * basis[1][i] +
                  c * step * basis[2][i];
        auto proj = make_projection(sp, f, w);
        grid_min =
            std::min(grid_min, projection_norm_estimate(sp, proj, lean));
      }
  CHECK(grid_min > 1.0 + 1e-8);
  CHECK(res.norm_estimate <= grid_min + 1e-6);
}

TEST_CASE("estimate is convex along affine segments of w") {
  auto sp = corollary4();
  auto f = make_hyperplane(sp, Vector{0.25, 1.0, -0.5, 0.75});
  SearchConfig cfg = eval_cfg(11);
  cfg.restarts = 16;
  Vector w1 = random_w(sp, f.f, 21);
  Vector w2 = random_w(sp, f.f, 22);
  double e1 = projection_norm_estimate(sp, make_projection(sp, f, w1), cfg);
  double e2 = projection_norm_estimate(sp, make_projection(sp, f, w2), cfg);
  for (double th : {0.25, 0.5, 0.75}) {
    Vector wm(sp.n);
    for (std::size_t i = 0; i < sp.n; ++i)
      wm[i] = th * w1[i] + (1.0 - th) * w2[i];
    double em = projection_norm_estimate(sp, make_projection(sp, f, wm), cfg);
    CHECK(em <= th * e1 + (1.0 - th) * e2 + 1e-6);
  }
}

TEST_CASE("gap check accepts the exact euclidean minimal projection") {
  auto sp = identity_family(3, 1);
  Vector e1{1.0, 0.0, 0.0};
  MinProjResult res;
  res.projection = make_projection(sp, make_hyperplane(sp, e1), e1);
  res.norm_estimate = 1.0;
  res.crude_upper = 2.0;
  auto rep = smoothness_gap_check(sp, res, 50);
  CHECK(rep.ok);
  CHECK(rep.t0 == 0.0);
  CHECK(rep.max_abs_fyw <= 1e-7);
  CHECK(rep.w_norm == doctest::Approx(1.0));
}

TEST_CASE("gap check passes on searched projections, n = 4 and 5") {
  {
    auto sp = corollary4();
    Vector fe(sp.F.row(0), sp.F.row(0) + 4);
    auto res =
        minimal_projection_search(sp, make_hyperplane(sp, fe), search_cfg(12));
    auto rep = smoothness_gap_check(sp, res, 100);
    CHECK(rep.ok);
    CHECK(rep.samples == 100);
    CHECK(rep.max_abs_fyw <= rep.bound_lemma);
    CHECK(rep.max_abs_fyw <= rep.bound_sqrt);
    CHECK(rep.falsify_min_residual >= -1e-9);
    CHECK(rep.w_norm >= 1.0 - 1e-9);
    CHECK(rep.w_norm < 4.0);
  }
  {
    auto sp = corollary5();
    Vector fe(sp.F.row(0), sp.F.row(0) + 5);
    SearchConfig cfg = search_cfg(13);
    cfg.restarts = 3;
    auto res = minimal_projection_search(sp, make_hyperplane(sp, fe), cfg);
    auto rep = smoothness_gap_check(sp, res, 100);
    CHECK(rep.ok);
    CHECK(rep.w_norm >= 1.0 - 1e-9);
    CHECK(rep.w_norm < 4.0);
  }
}

TEST_CASE("replay reproduces nodes and exact derivatives, p = 1") {
  auto sp = identity_family(3, 1);
  auto f = make_hyperplane(sp, Vector{1.0, 1.0, 1.0});
  Vector w{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  MinProjResult res;
  res.projection = make_projection(sp, f, w);
  res.norm_estimate = 1.0;
  Vector y{2.0, -1.0, -1.0};
  Vector z{0.0, 1.0, -1.0};
  auto rep = proof_chain_replay(sp, f, res, y, z);
  double ny = norm_eval(sp, y);
  double nz = norm_eval(sp, z);
  Vector yu = y, zu = z;
  for (auto& v : yu) v /= ny;
  for (auto& v : zu) v /= nz;
  REQUIRE(rep.nodes.size() == 3);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(rep.nodes[i] == doctest::Approx(zu[i] / yu[i]).epsilon(1e-12));
  double p0 = 0.0, p1 = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    p0 += yu[i] * res.projection.w[i];
    p1 += zu[i] * res.projection.w[i];
  }
  REQUIRE(rep.derivatives.size() == 2);
  CHECK(rep.derivatives[0] == doctest::Approx(p0).epsilon(1e-12));
  CHECK(rep.derivatives[1] == doctest::Approx(p1).epsilon(1e-12));
  CHECK(rep.markov_ok);
  CHECK(rep.inverse_ok);
  CHECK(rep.vector_bound_ok);
}

TEST_CASE("replay markov chain and inverse norms on a generic instance") {
  auto sp = corollary4();
  auto f = make_hyperplane(sp, Vector{1.0, 1.0, -1.0, 2.0});
  Vector w = random_w(sp, f.f, 31);
  MinProjResult res;
  res.projection = make_projection(sp, f, w);
  res.norm_estimate = projection_norm_estimate(sp, res.projection, eval_cfg());

  auto basis = null_space_basis(f.f);
  rng::Stream st(77);
  auto kernel_vec = [&](std::uint64_t) {
    Vector v(4, 0.0);
    for (const auto& b : basis) {
      double c = st.normal();
      for (std::size_t i = 0; i < 4; ++i) v[i] += c * b[i];
    }
    return v;
  };
  Vector y = kernel_vec(0);
  Vector z = kernel_vec(1);
  auto rep = proof_chain_replay(sp, f, res, y, z);

  CHECK(rep.markov_ok);
  CHECK(rep.inverse_ok);
  CHECK(rep.vector_bound_ok);
  CHECK(rep.inverse_exact > 0.0);
  CHECK(rep.inverse_exact <= rep.inverse_bound * (1.0 + 1e-9));

  // independent derivative oracle: interpolate P on 2p distinct points and
  // read the coefficients from the linear solve
  Vector yu = y, zu = z;
  double ny = norm_eval(sp, y), nz = norm_eval(sp, z);
  for (auto& v : yu) v /= ny;
  for (auto& v : zu) v /= nz;
  Vector fy = family_apply(sp, yu);
  Vector fz = family_apply(sp, zu);
  Vector fw = family_apply(sp, res.projection.w);
  int d = sp.two_p() - 1;
  auto p_at = [&](double t) {
    double s = 0.0;
    for (std::size_t i = 0; i < sp.m; ++i) {
      double base = fy[i] + t * fz[i];
      double pw = 1.0;
      for (int k = 0; k < d; ++k) pw *= base;
      s += pw * fw[i];
    }
    return s;
  };
  std::vector<double> ts;
  for (int j = 0; j <= d; ++j) ts.push_back(-1.0 + 2.0 * j / d);
  MatrixDense a(d + 1, d + 1);
  Vector rhs(d + 1);
  for (int r = 0; r <= d; ++r) {
    double pw = 1.0;
    for (int c = 0; c <= d; ++c) {
      a.at(r, c) = pw;
      pw *= ts[r];
    }
    rhs[r] = p_at(ts[r]);
  }
  Vector coef = lin_solve(a, rhs);
  double fact = 1.0;
  for (int k = 0; k <= d; ++k) {
    if (k > 0) fact *= k;
    double want = fact * coef[k];
    double scale = std::max({1.0, std::abs(want), std::abs(rep.derivatives[k])});
    CHECK(std::abs(rep.derivatives[k] - want) <= 1e-6 * scale);
  }

  std::size_t klim = std::min<std::size_t>(d, sp.m - 2);
  for (std::size_t k = 0; k <= klim; ++k)
    CHECK(std::abs(rep.derivatives[k]) <=
          rep.markov_bounds[k] * (1.0 + 1e-9) + 1e-12);
}

TEST_CASE("replay rejects y with a vanishing functional") {
  auto sp = corollary4();
  Vector f6(sp.F.row(5), sp.F.row(5) + 4);
  auto f = make_hyperplane(sp, f6);
  Vector w = random_w(sp, f.f, 41);
  MinProjResult res;
  res.projection = make_projection(sp, f, w);
  res.norm_estimate = 1.5;
  Vector y{0.0, 3.0, -2.0, 0.0};
  Vector z{4.0, -1.0, 2.0, -2.0};
  CHECK_THROWS_AS(proof_chain_replay(sp, f, res, y, z), DegenerateY);
}
