#pragma once

// Field-level integrals and the runtime checks that hold trajectories
// against the exact evolution laws: the L2 identity, the two-sided decay
// envelope, the gamma^2-bilinear scaling, the chiral-defect bound, and the
// support-radius cone bound. All reductions sum slab partials in a fixed
// order, so results do not depend on the thread count.

#include "dsdirac/evolution.hpp"

#include <string>
#include <vector>

namespace dsdirac {

// --- single-field integrals (volume element dx^3 included) -----------------

Real energy(const SpinorField& f);                     // int |psi|^2
Real xi_integral(const SpinorField& f);                // int psi* g0 psi
Complex gamma2_bilinear(const SpinorField& f);         // int psi^T g2 psi
Real chiral_charge(const SpinorField& f);              // int rho
Real defect_integral(const SpinorField& f, Complex z); // int |psi - z g2 conj psi|^2

// Smallest radius around `center` outside of which the mass fraction is
// below `threshold`.
Real support_radius(const SpinorField& f, Real threshold,
                    const Vec3& center = Vec3::Zero());

// --- trajectory checks ------------------------------------------------------

struct CheckResult {
  std::string name;
  bool applicable = true;
  bool passed = false;
  Real max_violation = 0.0;  // check-specific normalized excess
  Real at_t = 0.0;
  std::string detail;
};

struct DiagnosticReport {
  std::vector<CheckResult> checks;
  bool all_passed() const {
    for (const auto& c : checks) {
      if (c.applicable && !c.passed) return false;
    }
    return true;
  }
};

// ||psi(t)||^2 = exp(-3Ht) ||psi(0)||^2
//              + 2 Im(m) exp(-3Ht) int_0^t exp(3Hs) int psi* g0 psi dx ds.
// History integral: trapezoid over samples with Euler-Maclaurin endpoint
// correction when the samples are uniform.
CheckResult check_energy_identity(const Trajectory& traj,
                                  const PhysicalParams& p,
                                  Real tol_rel = 1e-4);

// exp(delta_- t / 2) <= ||psi(t)|| / ||psi(0)|| <= exp(delta_+ t / 2).
CheckResult check_decay_envelope(const Trajectory& traj,
                                 const PhysicalParams& p, Real tol = 1e-3);

// Q(t) exp(3Ht) = Q(0) with Q = int psi^T g2 psi; deviation measured
// against the initial energy.
CheckResult check_gamma2_law(const Trajectory& traj, const PhysicalParams& p,
                             Real tol_rel = 1e-6);

// defect(t) <= 4 |Im m| exp(-3Ht) int_0^t exp(3Hs) int rho dx ds for data
// with zero initial defect; reports the equality-form residual as detail.
CheckResult check_chiral_bound(const Trajectory& traj,
                               const PhysicalParams& p, Real tol = 1e-3,
                               Real abs_floor_rel = 1e-8);

// support_radius(t) <= R0 + phi(t) + 3 dx with R0 measured at the first
// sample.
CheckResult check_support(const Trajectory& traj, const PhysicalParams& p);

DiagnosticReport run_all_checks(const Trajectory& traj,
                                const PhysicalParams& p);

// --- output helpers ---------------------------------------------------------

std::string format17(Real v);

// Columns: t,E,E_envelope_hi,E_envelope_lo,Q_re,Q_im,chiral_charge,
// support_radius. 17 significant digits.
std::string timeseries_csv(const Trajectory& traj, const PhysicalParams& p);

}  // namespace dsdirac
