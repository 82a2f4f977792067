"""Sudden-death-of-entanglement predicates, crossing detection, and the RK4 oracle.

Two closed-form criteria cover the pure regimes:

* flip couplings on both qubits -- sudden death occurs if and only if the
  initial state, rotated qubit-wise into the frame where each flip axis is
  z, has no zeros on its diagonal. The long-time limit of lam is
  -2 sqrt(min(d1 d4, d2 d3)) in terms of that rotated diagonal.
* dissipative couplings on both qubits -- |u x v| != 1/2 on both qubits is
  sufficient for sudden death from any entangled initial state, with
  lam_inf = -1/2 sqrt((1 - |2 w1|^2)(1 - |2 w2|^2)). When some |w| = 1/2
  (standard amplitude damping) the criterion is silent: sudden death may
  or may not occur.

Mixed flip/dissipative pairs are handled numerically from the lam(t)
trajectory.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .channel import Coupling, Dissipative, Flip, classify
from .errors import GridTooCoarse, NotEntangled, WrongClass
from .linalg import IDENTITY_2
from .pair import concurrence, default_grid, lambda_at, lambda_trajectory

ZERO_DIAGONAL_TOL = 1e-12
AD_TOL = 1e-9
# lam values inside (-CROSSING_FLOOR, CROSSING_FLOOR) are numerically zero:
# the eigenvalue roots carry O(eps * l1) cancellation noise, so only a drop
# below -CROSSING_FLOOR counts as a genuine sign change.
CROSSING_FLOOR = 1e-9

METHOD_FLIP = "flip-criterion"
METHOD_DISSIPATIVE = "dissipative-criterion"
METHOD_NUMERICAL = "numerical"


@dataclass(frozen=True)
class SdeVerdict:
    """Outcome of a sudden-death check.

    predicted is "yes", "no" or "not-covered"; tau (time units 1/gamma) is
    filled when a crossing was located numerically; method records which
    criterion produced the verdict.
    """

    predicted: str
    lambda_inf: float
    tau: float | None
    method: str

    def to_dict(self) -> dict:
        return {
            "predicted": self.predicted,
            "lambda_inf": self.lambda_inf,
            "tau": self.tau,
            "method": self.method,
        }


@dataclass(frozen=True, eq=False)
class RotatedState:
    """State conjugated into the frame where both flip axes point along z."""

    rho_tilde: np.ndarray
    unitaries: tuple[np.ndarray, np.ndarray]


def rotation_for(u_hat) -> np.ndarray:
    """2x2 unitary U with U sz U^dag = u_hat . sigma; exactly 1 for u_hat = z.

    Built from the half-angle of u_hat against z and the azimuthal phase of
    its transverse part; any phase works on the axis u_hat = -z, where the
    transverse part vanishes.
    """
    u_hat = np.asarray(u_hat, dtype=float)
    norm_err = abs(float(np.linalg.norm(u_hat)) - 1.0)
    if norm_err > 1e-9:
        raise ValueError(f"u_hat must be a unit vector (|1 - |u_hat|| = {norm_err:.3e})")
    x, y, z = (float(c) for c in u_hat)
    if z >= 1.0 - 1e-12:
        return IDENTITY_2.copy()
    half = 0.5 * math.acos(max(-1.0, min(1.0, z)))
    sin_h, cos_h = math.sin(half), math.cos(half)
    transverse = math.hypot(x, y)
    phase = complex(x, y) / transverse if transverse > 0.0 else 1.0 + 0.0j
    return np.array(
        [
            [cos_h, -phase.conjugate() * sin_h],
            [phase * sin_h, cos_h],
        ],
        dtype=complex,
    )


def rotate_pair(rho0, u_hat1, u_hat2) -> RotatedState:
    """Conjugate a two-qubit state by (U1 (x) U2)^dag with U_n from rotation_for."""
    rho0 = np.asarray(rho0, dtype=complex)
    u1 = rotation_for(u_hat1)
    u2 = rotation_for(u_hat2)
    big = np.kron(u1, u2)
    return RotatedState(rho_tilde=big.conj().T @ rho0 @ big, unitaries=(u1, u2))


def predict_flip(rho0, u_hat1, u_hat2, zero_tol: float = ZERO_DIAGONAL_TOL) -> SdeVerdict:
    """Necessary-and-sufficient sudden-death verdict for two flip couplings.

    Requires an entangled rho0. The answer is yes exactly when the rotated
    state has all four diagonal entries above ``zero_tol``.
    """
    ent = concurrence(rho0)
    if ent.concurrence <= 0.0:
        raise NotEntangled("initial state has zero concurrence")
    rotated = rotate_pair(rho0, u_hat1, u_hat2)
    diag = np.real(np.diag(rotated.rho_tilde))
    smallest_product = float(min(diag[0] * diag[3], diag[1] * diag[2]))
    lam_inf = -2.0 * math.sqrt(max(smallest_product, 0.0)) + 0.0
    predicted = "yes" if bool(np.all(diag > zero_tol)) else "no"
    return SdeVerdict(predicted, lam_inf, None, METHOD_FLIP)


def predict_dissipative(c1: Coupling, c2: Coupling, ad_tol: float = AD_TOL) -> SdeVerdict:
    """Sufficient sudden-death verdict for two dissipative couplings.

    Yes whenever both |u x v| differ from 1/2 by more than ``ad_tol``; this
    holds for every entangled initial state. If either qubit sits on the
    amplitude-damping surface |w| = 1/2 the criterion does not decide and
    the verdict is "not-covered".
    """
    magnitudes = []
    for n, c in ((1, c1), (2, c2)):
        cls = classify(c)
        if not isinstance(cls, Dissipative):
            raise WrongClass(f"coupling {n} is not dissipative")
        magnitudes.append(float(np.linalg.norm(cls.w)))
    covered = all(abs(m - 0.5) > ad_tol for m in magnitudes)
    product = 1.0
    for m in magnitudes:
        product *= max(0.0, 1.0 - 4.0 * m * m)
    lam_inf = -0.5 * math.sqrt(product) + 0.0
    return SdeVerdict("yes" if covered else "not-covered", lam_inf, None, METHOD_DISSIPATIVE)


def detect_tau(
    traj,
    lambda_of_t=None,
    lambda_inf: float | None = None,
    gap_tol: float = 0.5,
    t_tol: float = 1e-9,
) -> float | None:
    """Locate the first time lam(t) crosses zero on a trajectory.

    ``traj`` is a sequence of (t, lam, ...) records with lam(0) > 0. A
    crossing is registered when lam drops below -1e-9 (values inside the
    noise band around zero do not count). The bracket is then refined by
    bisection on ``lambda_of_t``, recomputed from the exact channel at each
    candidate time; without a callable the bracket is interpolated linearly.

    Returns None when lam stays positive on the whole grid and the supplied
    lambda_inf (if any) is >= -1e-9. Raises GridTooCoarse when the bracket
    spans more than ``gap_tol`` in time, or when the grid ends before a
    crossing that lambda_inf < -1e-9 guarantees.
    """
    times = [float(row[0]) for row in traj]
    lams = [float(row[1]) for row in traj]
    if not lams or lams[0] <= 0.0:
        raise ValueError("trajectory must start with lam(0) > 0")

    neg = next((i for i, lam in enumerate(lams) if lam < -CROSSING_FLOOR), None)
    if neg is None:
        if lambda_inf is not None and lambda_inf < -CROSSING_FLOOR:
            raise GridTooCoarse(
                "lam stays positive on the grid but its long-time limit is "
                f"{lambda_inf:.3e}; extend the grid past the crossing"
            )
        return None

    pos = neg - 1
    while pos > 0 and lams[pos] <= CROSSING_FLOOR:
        pos -= 1
    if lams[pos] <= 0.0:
        raise GridTooCoarse("no clearly positive point precedes the crossing")
    if times[neg] - times[pos] > gap_tol:
        raise GridTooCoarse(
            f"sign change straddles a gap of {times[neg] - times[pos]:.3g} "
            f"(> {gap_tol:g}) in time"
        )

    lo, hi = times[pos], times[neg]
    if lambda_of_t is None:
        frac = lams[pos] / (lams[pos] - lams[neg])
        return lo + frac * (hi - lo)
    while hi - lo > t_tol:
        mid = 0.5 * (lo + hi)
        if lambda_of_t(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def oracle_rk4(r0, coupling: Coupling, t_end: float, dt: float) -> np.ndarray:
    """Integrate dr/dt = 4 gamma {u (u.r) + v (v.r) + 2 w - r} with fixed-step RK4.

    Deliberately independent of the closed-form propagators: plain classical
    Runge-Kutta on the Bloch equation, global error O(dt^4). Requires
    dt <= 1e-3 / gamma.
    """
    gamma = coupling.gamma
    if dt > 1e-3 / gamma:
        raise ValueError("dt must be <= 1e-3 / gamma for the oracle")
    ux, uy, uz = (float(c) for c in coupling.u)
    vx, vy, vz = (float(c) for c in coupling.v)
    wx = uy * vz - uz * vy
    wy = uz * vx - ux * vz
    wz = ux * vy - uy * vx
    g4 = 4.0 * gamma
    bx, by, bz = 2.0 * g4 * wx, 2.0 * g4 * wy, 2.0 * g4 * wz
    a00 = g4 * (ux * ux + vx * vx - 1.0)
    a01 = g4 * (ux * uy + vx * vy)
    a02 = g4 * (ux * uz + vx * vz)
    a11 = g4 * (uy * uy + vy * vy - 1.0)
    a12 = g4 * (uy * uz + vy * vz)
    a22 = g4 * (uz * uz + vz * vz - 1.0)

    def rhs(px: float, py: float, pz: float):
        return (
            a00 * px + a01 * py + a02 * pz + bx,
            a01 * px + a11 * py + a12 * pz + by,
            a02 * px + a12 * py + a22 * pz + bz,
        )

    x, y, z = (float(c) for c in np.asarray(r0, dtype=float))
    remaining = float(t_end)
    n = int(round(remaining / dt)) if remaining > 0.0 else 0
    steps = [dt] * n
    leftover = remaining - n * dt
    if abs(leftover) > 1e-15:
        steps.append(leftover)
    for h in steps:
        h2, h6 = 0.5 * h, h / 6.0
        k1x, k1y, k1z = rhs(x, y, z)
        k2x, k2y, k2z = rhs(x + h2 * k1x, y + h2 * k1y, z + h2 * k1z)
        k3x, k3y, k3z = rhs(x + h2 * k2x, y + h2 * k2y, z + h2 * k2z)
        k4x, k4y, k4z = rhs(x + h * k3x, y + h * k3y, z + h * k3z)
        x += h6 * (k1x + 2.0 * (k2x + k3x) + k4x)
        y += h6 * (k1y + 2.0 * (k2y + k3y) + k4y)
        z += h6 * (k1z + 2.0 * (k2z + k3z) + k4z)
    return np.array([x, y, z])


def sde_check(rho0, c1: Coupling, c2: Coupling, grid=None) -> SdeVerdict:
    """Full sudden-death check for an entangled pair under two couplings.

    Dispatches to the flip or dissipative criterion when both couplings
    share a class, otherwise falls back to the numerical route. In every
    case the lam(t) trajectory is scanned and tau is filled when a crossing
    lies on the grid (the dissipative "not-covered" verdict can still come
    with a finite tau).
    """
    rho0 = np.asarray(rho0, dtype=complex)
    if concurrence(rho0).concurrence <= 0.0:
        raise NotEntangled("initial state has zero concurrence")
    cls1, cls2 = classify(c1), classify(c2)
    gamma_min = min(c1.gamma, c2.gamma)
    if grid is None:
        grid = default_grid(gamma=gamma_min)

    if isinstance(cls1, Flip) and isinstance(cls2, Flip):
        verdict = predict_flip(rho0, cls1.u_hat, cls2.u_hat)
    elif isinstance(cls1, Dissipative) and isinstance(cls2, Dissipative):
        verdict = predict_dissipative(c1, c2)
    else:
        lam_late = lambda_at(rho0, c1, c2, 20.0 / gamma_min)
        verdict = SdeVerdict("no", lam_late, None, METHOD_NUMERICAL)

    traj = lambda_trajectory(rho0, c1, c2, grid)
    tau = detect_tau(
        traj,
        lambda_of_t=lambda t: lambda_at(rho0, c1, c2, t),
        lambda_inf=verdict.lambda_inf,
    )
    if verdict.method == METHOD_NUMERICAL:
        verdict = replace(verdict, predicted="yes" if tau is not None else "no")
    return replace(verdict, tau=tau)
