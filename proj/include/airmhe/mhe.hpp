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

#pragma once

// Constrained moving-horizon estimator.
//
// Outer layer: a real-time iteration Gauss-Newton SQP that performs exactly
// one SQP iteration per sample around the shifted previous solution.
// Each QP subproblem is solved by a primal barrier interior-point method
// with a fixed iteration budget (n_kappa barrier stages times n_qp Newton
// steps, backtracking line search over step sizes 2^-ns). Every Newton step
// reduces to an equality-constrained linear MHE problem solved in O(N) by a
// Riccati (Kalman-smoother style) forward/backward recursion on 3x3 and 6x6
// blocks.
//
// The solver works in internally scaled variables (states and inputs divided
// by the half-width of their box) so that all components are O(1); scaling
// is an exact change of variables and is undone on exit.

#include <vector>

#include "airmhe/airmodel.hpp"
#include "airmhe/smallmat.hpp"

namespace airmhe {

/// Scalar tuning parameters, in physical units (rad, m/s).
struct Weights {
  double p_alpha = 3.0e-4;  // arrival variance, rad^2
  double p_w = 4.0;         // arrival variance per wind axis, (m/s)^2
  double q_alpha = 3.0e-4;  // process variance of u_alpha, (rad/s)^2
  double q_w = 60.0;        // process variance per wind axis, (m/s^2)^2
  double r_alpha = 1.0e-6;  // AOA measurement variance, rad^2
  double r_vz = 0.09;       // vertical-speed variance, (m/s)^2
  double r_vc = 0.0662;     // VCAS variance, (m/s)^2

  Mat3 arrival_p() const {
    return Mat3::diag(Vec3{{p_alpha, p_w, p_w}});
  }
  Mat3 process_q() const {
    return Mat3::diag(Vec3{{q_alpha, q_w, q_w}});
  }
};

/// Physical box bounds on state and process input.
struct StateBounds {
  Vec3 x_lb, x_ub;  // [alpha rad, Wx m/s, Wz m/s]
  Vec3 u_lb, u_ub;  // [u_alpha rad/s, u_wx m/s^2, u_wz m/s^2]

  /// Wind |W| <= 120 kts, |u_w| <= 30 kts/s, alpha in [-10, 30] deg,
  /// |u_alpha| <= 10 deg/s.
  static StateBounds defaults();
};

/// Fused measurement sample with per-channel effective variances.
struct MeasSample {
  Vec3 y;       // [alpha_m rad, Vz_m m/s, Vc_m m/s]
  Vec3 r_diag;  // effective variances [rad^2, (m/s)^2, (m/s)^2]
};

/// Sliding window of iterates: N+1 states/params/measurements, N inputs.
struct HorizonWindow {
  int n = 0;
  std::vector<EstimState> states;
  std::vector<ProcessInput> inputs;
  std::vector<FlightParams> params;
  std::vector<MeasSample> meas;
  EstimState prior;  // arrival-cost reference (equals states[0] after shift)

  bool consistent() const {
    return n >= 1 && states.size() == static_cast<size_t>(n + 1) &&
           inputs.size() == static_cast<size_t>(n) &&
           params.size() == static_cast<size_t>(n + 1) &&
           meas.size() == static_cast<size_t>(n + 1);
  }
};

/// Linearized QP subproblem data (stagewise; stage i links i -> i+1).
struct QpData {
  int n = 0;
  std::vector<Mat3> a;            // N state-transition Jacobians
  std::vector<Mat3> b;            // N input Jacobians (ts * I)
  std::vector<Mat3> c;            // N+1 output Jacobians
  std::vector<Vec3> f;            // N dynamics defects
  std::vector<Vec3> r_u;          // N input residuals
  std::vector<Vec3> r_y;          // N+1 measurement residuals
  std::vector<Mat3> r;            // N+1 measurement covariances
  std::vector<Vec3> dx_lb, dx_ub; // N+1 shifted state bounds
  std::vector<Vec3> du_lb, du_ub; // N shifted input bounds
  Mat3 p;                         // arrival covariance
  Mat3 q;                         // process covariance
};

/// Barrier interior-point configuration.
struct BarrierConfig {
  double kappa_init = 1.0e-2;  // in scaled units
  int n_kappa = 2;             // barrier stages
  int n_qp = 2;                // Newton iterations per stage
  int ns_max = 10;             // max step halvings before rounding to zero
  double kappa_decay = 0.1;
};

/// Equality-constrained linear MHE problem fed to the Riccati solver
/// (the linearized KKT system in reference form).
struct KktProblem {
  int n = 0;
  Mat3 p;                      // arrival covariance
  Vec3 rbar_x;                 // arrival reference
  std::vector<Mat3> a;         // N
  std::vector<Mat3> b;         // N
  std::vector<Mat63> cbar;     // N+1 stacked output/barrier Jacobians
  std::vector<Mat6> rbar;      // N+1 stacked covariances diag(R, I)
  std::vector<Vec6> rbar_y;    // N+1 stacked references
  std::vector<Mat3> qbar;      // N input prior covariances
  std::vector<Vec3> rbar_u;    // N input prior means
  std::vector<Vec3> r_p;       // N dynamics defects
};

/// Reusable Riccati recursion storage.
struct KktWork {
  std::vector<Mat3> p_hat, p_f;
  std::vector<Mat63> pi;
  std::vector<Mat6> xi;
  std::vector<Mat36> omega, gain;
  std::vector<Vec6> innov;
  std::vector<Vec3> x_hat, x_prime, u_prime;
  void resize(int n);
};

/// Search direction / QP solution increments.
struct QpIterate {
  std::vector<Vec3> dx;  // N+1
  std::vector<Vec3> du;  // N
  void assign_zero(int n);
};

/// Per-iteration solver instrumentation.
struct SolveTrace {
  int kkt_solves = 0;
  struct Iter {
    double kappa;
    double step;
    double dir_inf_norm;
  };
  std::vector<Iter> iters;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Elementwise log-barrier value, gradient and sqrt-Hessian diagonal at
/// delta strictly inside [lb, ub]. Throws InfeasiblePointError otherwise.
double barrier_terms(const Vec3& delta, const Vec3& lb, const Vec3& ub,
                     Vec3& grad, Vec3& sqrt_hess);

/// Builds the QP subproblem around the window iterates.
QpData linearize(const HorizonWindow& win, const Weights& w,
                 const StateBounds& bounds, double ts, SensorMask mask);

/// Builds the reference-form KKT problem for the current barrier weight and
/// inner iterate. Operates in whatever frame `qp` is expressed in.
void assemble_kkt(const QpData& qp, const QpIterate& iterate, double kappa,
                  KktProblem& out);

/// Riccati forward/backward solve of the equality-constrained problem.
void solve_kkt(const KktProblem& prob, KktWork& work, QpIterate& direction);

/// Largest step 2^-ns (ns <= ns_max) keeping iterate + s*direction strictly
/// inside the shifted bounds; 0 when even the smallest step is infeasible.
double line_search(const QpIterate& iterate, const QpIterate& direction,
                   const QpData& qp, int ns_max);

/// Full primal barrier solve: exactly n_kappa*n_qp KKT solves, strictly
/// feasible output. Throws InfeasiblePointError when zero is not strictly
/// interior for the shifted bounds.
QpIterate solve_qp(const QpData& qp, const BarrierConfig& cfg,
                   SolveTrace* trace = nullptr);

/// Cold-start window: all iterates at x0, inputs zero, prior x0.
HorizonWindow initialize_window(const EstimState& x0,
                                const FlightParams& params0,
                                const MeasSample& meas0, int n);

// ---------------------------------------------------------------------------
// Estimator
// ---------------------------------------------------------------------------

struct MheConfig {
  int horizon = 3;
  double ts = 0.04;
  BarrierConfig barrier;
  StateBounds bounds = StateBounds::defaults();
};

struct StepResult {
  EstimState estimate;   // filtered state at the new sample
  OutputVec prediction;  // one-step-ahead output prediction
  bool degraded = false; // model domain error: window held, outputs reused
  SolveTrace trace;
};

/// One estimator instance: owns the window and performs one shift +
/// linearize + QP solve + iterate update per sample.
class MheEstimator {
 public:
  MheEstimator(const MheConfig& cfg, const Weights& w);

  /// Seeds the window; returns the initial one-step-ahead prediction.
  OutputVec initialize(const EstimState& x0, const FlightParams& params0,
                       const MeasSample& meas0);

  /// Processes one sample. See StepResult for the degraded-mode contract.
  StepResult step(const MeasSample& meas, const FlightParams& params,
                  SensorMask mask = SensorMask::kAllAvailable);

  bool initialized() const { return initialized_; }
  const HorizonWindow& window() const { return win_; }
  const MheConfig& config() const { return cfg_; }
  const Weights& weights() const { return weights_; }

 private:
  EstimState clamp_interior(const EstimState& x) const;

  MheConfig cfg_;
  Weights weights_;
  HorizonWindow win_;
  OutputVec last_prediction_{};
  bool initialized_ = false;
};

}  // namespace airmhe
