// Copyright 2026 The airmhe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "airmhe/mhe.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "airmhe/constants.hpp"
#include "airmhe/errors.hpp"

namespace airmhe {

namespace cn = constants;

StateBounds StateBounds::defaults() {
  StateBounds b;
  const double w_max = 120.0 * cn::kKtsToMs;
  const double uw_max = 30.0 * cn::kKtsToMs;
  b.x_lb = Vec3{{-10.0 * cn::kDegToRad, -w_max, -w_max}};
  b.x_ub = Vec3{{30.0 * cn::kDegToRad, w_max, w_max}};
  b.u_lb = Vec3{{-10.0 * cn::kDegToRad, -uw_max, -uw_max}};
  b.u_ub = Vec3{{10.0 * cn::kDegToRad, uw_max, uw_max}};
  return b;
}

void KktWork::resize(int n) {
  const size_t ns = static_cast<size_t>(n) + 1;
  p_hat.resize(ns);
  p_f.resize(ns);
  pi.resize(ns);
  xi.resize(ns);
  omega.resize(ns);
  gain.resize(ns);
  innov.resize(ns);
  x_hat.resize(ns);
  x_prime.resize(ns);
  u_prime.resize(static_cast<size_t>(n));
}

void QpIterate::assign_zero(int n) {
  dx.assign(static_cast<size_t>(n) + 1, Vec3{});
  du.assign(static_cast<size_t>(n), Vec3{});
}

// ---------------------------------------------------------------------------
// Barrier terms
// ---------------------------------------------------------------------------

double barrier_terms(const Vec3& delta, const Vec3& lb, const Vec3& ub,
                     Vec3& grad, Vec3& sqrt_hess) {
  double phi = 0.0;
  for (int j = 0; j < 3; ++j) {
    const double hi = ub[j] - delta[j];
    const double lo = delta[j] - lb[j];
    if (!(hi > 0.0) || !(lo > 0.0))
      throw InfeasiblePointError("barrier evaluated at component " +
                                 std::to_string(j) +
                                 " on or outside the box");
    phi += -std::log(hi) - std::log(lo);
    grad[j] = 1.0 / hi - 1.0 / lo;
    sqrt_hess[j] = std::sqrt(1.0 / (hi * hi) + 1.0 / (lo * lo));
  }
  return phi;
}

// ---------------------------------------------------------------------------
// Linearization
// ---------------------------------------------------------------------------

QpData linearize(const HorizonWindow& win, const Weights& w,
                 const StateBounds& bounds, double ts, SensorMask mask) {
  const int n = win.n;
  QpData qp;
  qp.n = n;
  qp.a.resize(n);
  qp.b.resize(n);
  qp.c.resize(n + 1);
  qp.f.resize(n);
  qp.r_u.resize(n);
  qp.r_y.resize(n + 1);
  qp.r.resize(n + 1);
  qp.dx_lb.resize(n + 1);
  qp.dx_ub.resize(n + 1);
  qp.du_lb.resize(n);
  qp.du_ub.resize(n);
  qp.p = w.arrival_p();
  qp.q = w.process_q();

  const Mat3 b_mat = ts * Mat3::identity();
  for (int i = 0; i <= n; ++i) {
    const EstimState& x = win.states[i];
    const FlightParams& th = win.params[i];
    try {
      qp.c[i] = jacobian_C(x, th, mask);
      qp.r_y[i] = win.meas[i].y - h_output(x, th).vec();
      if (i < n) {
        qp.a[i] = jacobian_A(x, th, ts);
        qp.b[i] = b_mat;
        qp.f[i] = discrete_step(x, win.inputs[i], th, ts).vec() -
                  win.states[i + 1].vec();
        qp.r_u[i] = -win.inputs[i].vec();
      }
    } catch (const DomainError& e) {
      throw DomainError("linearize stage " + std::to_string(i) + ": " +
                        e.what());
    }
    // Rows of lost sensor families carry no information; keep their
    // residual at zero so the stacked vectors stay finite.
    if (!aoa_available(mask)) qp.r_y[i][0] = 0.0;
    if (!vcas_available(mask)) qp.r_y[i][2] = 0.0;
    qp.r[i] = Mat3::diag(win.meas[i].r_diag);
    qp.dx_lb[i] = bounds.x_lb - x.vec();
    qp.dx_ub[i] = bounds.x_ub - x.vec();
    if (i < n) {
      qp.du_lb[i] = bounds.u_lb - win.inputs[i].vec();
      qp.du_ub[i] = bounds.u_ub - win.inputs[i].vec();
    }
  }
  return qp;
}

// ---------------------------------------------------------------------------
// KKT assembly
// ---------------------------------------------------------------------------

void assemble_kkt(const QpData& qp, const QpIterate& iterate, double kappa,
                  KktProblem& out) {
  const int n = qp.n;
  const double sqrt_kappa = std::sqrt(kappa);
  out.n = n;
  out.p = qp.p;
  out.a = qp.a;
  out.b = qp.b;
  out.cbar.resize(n + 1);
  out.rbar.resize(n + 1);
  out.rbar_y.resize(n + 1);
  out.qbar.resize(n);
  out.rbar_u.resize(n);
  out.r_p.resize(n);
  out.rbar_x = -iterate.dx[0];

  const Mat3 q_inv = inv3(qp.q);

  Vec3 g, l;
  for (int i = 0; i <= n; ++i) {
    barrier_terms(iterate.dx[i], qp.dx_lb[i], qp.dx_ub[i], g, l);

    Mat63& cb = out.cbar[i];
    cb = Mat63::zero();
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) cb(r, c) = qp.c[i](r, c);
    for (int j = 0; j < 3; ++j) cb(3 + j, j) = sqrt_kappa * l[j];

    Mat6& rb = out.rbar[i];
    rb = Mat6::zero();
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) rb(r, c) = qp.r[i](r, c);
    for (int j = 0; j < 3; ++j) rb(3 + j, 3 + j) = 1.0;

    const Vec3 top = qp.r_y[i] - qp.c[i] * iterate.dx[i];
    Vec6& ry = out.rbar_y[i];
    for (int j = 0; j < 3; ++j) {
      ry[j] = top[j];
      ry[3 + j] = -sqrt_kappa * g[j] / l[j];
    }

    if (i < n) {
      barrier_terms(iterate.du[i], qp.du_lb[i], qp.du_ub[i], g, l);
      Mat3 qbar_inv = q_inv;
      for (int j = 0; j < 3; ++j) qbar_inv(j, j) += kappa * l[j] * l[j];
      out.qbar[i] = inv3(qbar_inv);
      // Input prior mean: the Newton gradient premultiplied by the Newton
      // covariance, so the recursion's u' seed carries input units.
      const Vec3 grad = q_inv * (qp.r_u[i] - iterate.du[i]) - kappa * g;
      out.rbar_u[i] = out.qbar[i] * grad;
      out.r_p[i] = -qp.f[i] - qp.a[i] * iterate.dx[i] -
                   qp.b[i] * iterate.du[i] + iterate.dx[i + 1];
    }
  }
}

// ---------------------------------------------------------------------------
// Riccati recursion (the search-direction solve)
// ---------------------------------------------------------------------------

namespace {

Mat3 symmetrize(const Mat3& m) {
  Mat3 s;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) s(r, c) = 0.5 * (m(r, c) + m(c, r));
  return s;
}

}  // namespace

void solve_kkt(const KktProblem& prob, KktWork& work, QpIterate& direction) {
  const int n = prob.n;
  work.resize(n);
  direction.dx.resize(n + 1);
  direction.du.resize(n);

  // Factorization sweep.
  work.p_hat[0] = prob.p;
  for (int i = 0; i <= n; ++i) {
    work.pi[i] = prob.cbar[i] * work.p_hat[i];
    const Mat6 s = prob.rbar[i] + mul_nt(work.pi[i], prob.cbar[i]);
    try {
      work.xi[i] = inv6_block(s);
    } catch (const SingularMatrixError& e) {
      throw SingularMatrixError(
          "solve_kkt: innovation covariance singular at stage " +
              std::to_string(i),
          e.det());
    }
    work.omega[i] = mul_tn(prob.cbar[i], work.xi[i]);
    work.gain[i] = work.p_hat[i] * work.omega[i];
    work.p_f[i] =
        symmetrize(work.p_hat[i] - work.gain[i] * work.pi[i]);
    if (i < n) {
      work.p_hat[i + 1] = sym_sandwich(prob.a[i], work.p_f[i]) +
                          sym_sandwich(prob.b[i], prob.qbar[i]);
    }
  }

  // Forward recursion.
  work.x_hat[0] = prob.rbar_x;
  for (int i = 0; i <= n; ++i) {
    work.innov[i] = prob.rbar_y[i] - prob.cbar[i] * work.x_hat[i];
    work.x_prime[i] = work.x_hat[i] + work.gain[i] * work.innov[i];
    if (i < n) {
      work.u_prime[i] = prob.rbar_u[i];
      work.x_hat[i + 1] = -prob.r_p[i] + prob.a[i] * work.x_prime[i] +
                          prob.b[i] * work.u_prime[i];
    }
  }

  // Backward recursion.
  direction.dx[n] = work.x_prime[n];
  if (n == 0) return;
  Vec3 lambda = -(work.omega[n] * work.innov[n]);
  for (int i = n - 1; i >= 0; --i) {
    const Vec3 xi_i = mulv_t(prob.a[i], lambda);
    direction.du[i] =
        work.u_prime[i] - prob.qbar[i] * mulv_t(prob.b[i], lambda);
    direction.dx[i] = work.x_prime[i] - work.p_f[i] * xi_i;
    if (i > 0)
      lambda = xi_i - work.omega[i] * (work.innov[i] + work.pi[i] * xi_i);
  }
}

// ---------------------------------------------------------------------------
// Line search
// ---------------------------------------------------------------------------

namespace {

bool strictly_inside(const Vec3& v, const Vec3& lb, const Vec3& ub) {
  for (int j = 0; j < 3; ++j)
    if (!(v[j] > lb[j] && v[j] < ub[j])) return false;
  return true;
}

}  // namespace

double line_search(const QpIterate& iterate, const QpIterate& direction,
                   const QpData& qp, int ns_max) {
  for (int ns = 0; ns <= ns_max; ++ns) {
    const double s = std::ldexp(1.0, -ns);
    bool ok = true;
    for (int i = 0; i <= qp.n && ok; ++i)
      ok = strictly_inside(iterate.dx[i] + s * direction.dx[i], qp.dx_lb[i],
                           qp.dx_ub[i]);
    for (int i = 0; i < qp.n && ok; ++i)
      ok = strictly_inside(iterate.du[i] + s * direction.du[i], qp.du_lb[i],
                           qp.du_ub[i]);
    if (ok) return s;
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Variable scaling (exact change of variables; improves conditioning only)
// ---------------------------------------------------------------------------

namespace {

struct Scaling {
  Vec3 sx, su;
};

double clamp_scale(double v) {
  return std::clamp(v, 1e-9, 1e12);
}

Scaling derive_scaling(const QpData& qp) {
  Scaling sc;
  for (int j = 0; j < 3; ++j) {
    sc.sx[j] = clamp_scale(0.5 * (qp.dx_ub[0][j] - qp.dx_lb[0][j]));
    sc.su[j] = qp.n > 0
                   ? clamp_scale(0.5 * (qp.du_ub[0][j] - qp.du_lb[0][j]))
                   : 1.0;
  }
  return sc;
}

Vec3 ediv(const Vec3& v, const Vec3& s) {
  Vec3 o;
  for (int j = 0; j < 3; ++j) o[j] = v[j] / s[j];
  return o;
}

Vec3 emul(const Vec3& v, const Vec3& s) {
  Vec3 o;
  for (int j = 0; j < 3; ++j) o[j] = v[j] * s[j];
  return o;
}

QpData scale_qp(const QpData& qp, const Scaling& sc) {
  QpData s = qp;
  for (int i = 0; i <= qp.n; ++i) {
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) s.c[i](r, c) = qp.c[i](r, c) * sc.sx[c];
    s.dx_lb[i] = ediv(qp.dx_lb[i], sc.sx);
    s.dx_ub[i] = ediv(qp.dx_ub[i], sc.sx);
    if (i < qp.n) {
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
          s.a[i](r, c) = qp.a[i](r, c) * sc.sx[c] / sc.sx[r];
          s.b[i](r, c) = qp.b[i](r, c) * sc.su[c] / sc.sx[r];
        }
      }
      s.f[i] = ediv(qp.f[i], sc.sx);
      s.r_u[i] = ediv(qp.r_u[i], sc.su);
      s.du_lb[i] = ediv(qp.du_lb[i], sc.su);
      s.du_ub[i] = ediv(qp.du_ub[i], sc.su);
    }
  }
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      s.p(r, c) = qp.p(r, c) / (sc.sx[r] * sc.sx[c]);
      s.q(r, c) = qp.q(r, c) / (sc.su[r] * sc.su[c]);
    }
  }
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Primal barrier interior-point loop
// ---------------------------------------------------------------------------

QpIterate solve_qp(const QpData& qp, const BarrierConfig& cfg,
                   SolveTrace* trace) {
  for (int i = 0; i <= qp.n; ++i)
    if (!strictly_inside(Vec3{}, qp.dx_lb[i], qp.dx_ub[i]))
      throw InfeasiblePointError(
          "solve_qp: zero deviation not strictly interior for state stage " +
          std::to_string(i));
  for (int i = 0; i < qp.n; ++i)
    if (!strictly_inside(Vec3{}, qp.du_lb[i], qp.du_ub[i]))
      throw InfeasiblePointError(
          "solve_qp: zero deviation not strictly interior for input stage " +
          std::to_string(i));

  const Scaling sc = derive_scaling(qp);
  const QpData qps = scale_qp(qp, sc);

  QpIterate it;
  it.assign_zero(qp.n);
  QpIterate dir;
  KktProblem prob;
  KktWork work;

  double kappa = cfg.kappa_init;
  const int total = cfg.n_kappa * cfg.n_qp;
  for (int j = 0; j < total; ++j) {
    if (j > 0 && j % cfg.n_qp == 0) kappa *= cfg.kappa_decay;
    assemble_kkt(qps, it, kappa, prob);
    solve_kkt(prob, work, dir);
    const double s = line_search(it, dir, qps, cfg.ns_max);
    double dmax = 0.0;
    for (int i = 0; i <= qp.n; ++i) {
      for (int c = 0; c < 3; ++c) dmax = std::max(dmax, std::abs(dir.dx[i][c]));
      it.dx[i] += s * dir.dx[i];
    }
    for (int i = 0; i < qp.n; ++i) {
      for (int c = 0; c < 3; ++c) dmax = std::max(dmax, std::abs(dir.du[i][c]));
      it.du[i] += s * dir.du[i];
    }
    if (trace != nullptr) {
      ++trace->kkt_solves;
      trace->iters.push_back({kappa, s, dmax});
    }
  }

  for (int i = 0; i <= qp.n; ++i) it.dx[i] = emul(it.dx[i], sc.sx);
  for (int i = 0; i < qp.n; ++i) it.du[i] = emul(it.du[i], sc.su);
  return it;
}

// ---------------------------------------------------------------------------
// Window management and the per-sample step
// ---------------------------------------------------------------------------

HorizonWindow initialize_window(const EstimState& x0,
                                const FlightParams& params0,
                                const MeasSample& meas0, int n) {
  HorizonWindow w;
  w.n = n;
  w.states.assign(static_cast<size_t>(n) + 1, x0);
  w.inputs.assign(static_cast<size_t>(n), ProcessInput{});
  w.params.assign(static_cast<size_t>(n) + 1, params0);
  w.meas.assign(static_cast<size_t>(n) + 1, meas0);
  w.prior = x0;
  return w;
}

MheEstimator::MheEstimator(const MheConfig& cfg, const Weights& w)
    : cfg_(cfg), weights_(w) {}

EstimState MheEstimator::clamp_interior(const EstimState& x) const {
  Vec3 v = x.vec();
  for (int j = 0; j < 3; ++j) {
    const double lo = cfg_.bounds.x_lb[j];
    const double hi = cfg_.bounds.x_ub[j];
    const double margin = 1e-6 * (hi - lo);
    v[j] = std::clamp(v[j], lo + margin, hi - margin);
  }
  return EstimState::from_vec(v);
}

OutputVec MheEstimator::initialize(const EstimState& x0,
                                   const FlightParams& params0,
                                   const MeasSample& meas0) {
  const EstimState seed = clamp_interior(x0);
  win_ = initialize_window(seed, params0, meas0, cfg_.horizon);
  last_prediction_ =
      h_output(discrete_step(seed, ProcessInput{}, params0, cfg_.ts), params0);
  initialized_ = true;
  return last_prediction_;
}

StepResult MheEstimator::step(const MeasSample& meas,
                              const FlightParams& params, SensorMask mask) {
  if (!initialized_)
    throw std::logic_error("MheEstimator::step before initialize");
  const int n = win_.n;
  const HorizonWindow snapshot = win_;
  StepResult res;
  try {
    // Shift: drop the oldest stage, seed the new terminal stage with the
    // one-step prediction (zero input), anchor the prior on the retained
    // oldest iterate.
    const EstimState x_pred = clamp_interior(discrete_step(
        win_.states[n], ProcessInput{}, win_.params[n], cfg_.ts));
    for (int i = 0; i < n; ++i) {
      win_.states[i] = win_.states[i + 1];
      win_.params[i] = win_.params[i + 1];
      win_.meas[i] = win_.meas[i + 1];
      if (i < n - 1) win_.inputs[i] = win_.inputs[i + 1];
    }
    win_.states[n] = x_pred;
    win_.params[n] = params;
    win_.meas[n] = meas;
    if (n >= 1) win_.inputs[n - 1] = ProcessInput{};
    win_.prior = win_.states[0];

    const QpData qp = linearize(win_, weights_, cfg_.bounds, cfg_.ts, mask);
    const QpIterate sol = solve_qp(qp, cfg_.barrier, &res.trace);

    for (int i = 0; i <= n; ++i)
      win_.states[i] = EstimState::from_vec(win_.states[i].vec() + sol.dx[i]);
    for (int i = 0; i < n; ++i)
      win_.inputs[i] = ProcessInput::from_vec(win_.inputs[i].vec() + sol.du[i]);

    res.estimate = win_.states[n];
    res.prediction = h_output(
        discrete_step(win_.states[n], ProcessInput{}, params, cfg_.ts),
        params);
    last_prediction_ = res.prediction;
    res.degraded = false;
  } catch (const DomainError&) {
    win_ = snapshot;
    res.estimate = win_.states[n];
    res.prediction = last_prediction_;
    res.degraded = true;
  }
  return res;
}

}  // namespace airmhe
