"""Two-qubit states under independent local channels, and their concurrence.

Basis ordering is |00>, |01>, |10>, |11> with qubit 1 as the left tensor
factor and spin-up identified with |0>.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import Coupling
from .choi import kraus_of_coupling
from .errors import IncompleteKraus, InvalidWeight, NotHermitian
from .linalg import RELATIVE_SPECTRAL_ZERO, SIGMA_Y, herm_eig, sqrt_psd

DENSITY_HERMITIAN_TOL = 1e-10
DENSITY_TRACE_TOL = 1e-10
COMPLETENESS_TOL = 1e-8

_SPIN_FLIP = np.kron(SIGMA_Y, SIGMA_Y)


@dataclass(frozen=True, eq=False)
class ConcurrenceResult:
    """Concurrence C = max(0, lam) plus the four spin-flip roots (descending)."""

    lam: float
    concurrence: float
    roots: np.ndarray


def initial_state(kind: str, alpha_sq: float) -> np.ndarray:
    """Pure two-qubit state of the parallel or antiparallel family.

    ``plus`` is alpha |00> + beta |11>, ``minus`` is alpha |01> + beta |10>,
    with real alpha = sqrt(alpha_sq) and beta = sqrt(1 - alpha_sq). Both
    have concurrence 2 alpha beta.
    """
    if not 0.0 <= alpha_sq <= 1.0:
        raise InvalidWeight(f"alpha_sq = {alpha_sq!r} outside [0, 1]")
    alpha = math.sqrt(alpha_sq)
    beta = math.sqrt(1.0 - alpha_sq)
    psi = np.zeros(4, dtype=complex)
    if kind == "plus":
        psi[0], psi[3] = alpha, beta
    elif kind == "minus":
        psi[1], psi[2] = alpha, beta
    else:
        raise ValueError(f"kind must be 'plus' or 'minus', got {kind!r}")
    return np.outer(psi, psi.conj())


def _check_density4(rho: np.ndarray) -> None:
    if rho.shape != (4, 4):
        raise ValueError(f"two-qubit state must be 4x4, got {rho.shape}")
    dev = float(np.max(np.abs(rho - rho.conj().T)))
    if dev > DENSITY_HERMITIAN_TOL:
        raise NotHermitian(f"state deviates from Hermitian by {dev:.3e}")
    trace_err = abs(complex(np.trace(rho)) - 1.0)
    if trace_err > DENSITY_TRACE_TOL:
        raise ValueError(f"state trace deviates from 1 by {trace_err:.3e}")


def evolve_pair(rho0, kraus1, kraus2) -> np.ndarray:
    """Evolve a two-qubit state by independent local Kraus sets.

    rho(t) = sum_{ij} (K_i (x) K_j) rho0 (K_i (x) K_j)^dag. Raises
    IncompleteKraus when either set violates completeness beyond 1e-8.
    """
    rho0 = np.asarray(rho0, dtype=complex)
    _check_density4(rho0)
    for n, kraus in ((1, kraus1), (2, kraus2)):
        acc = sum(k.conj().T @ k for k in kraus)
        err = float(np.max(np.abs(acc - np.eye(2))))
        if err > COMPLETENESS_TOL:
            raise IncompleteKraus(
                f"Kraus set {n}: |sum K^dag K - 1| = {err:.3e}"
            )
    out = np.zeros((4, 4), dtype=complex)
    for k1 in kraus1:
        for k2 in kraus2:
            k = np.kron(k1, k2)
            out += k @ rho0 @ k.conj().T
    return out


def concurrence(rho) -> ConcurrenceResult:
    """Concurrence of a two-qubit density matrix.

    The roots l_1 >= ... >= l_4 are the square roots of the eigenvalues of
    rho (sy (x) sy) rho* (sy (x) sy), obtained from the Hermitian-similar
    matrix sqrt(rho) (sy (x) sy) rho* (sy (x) sy) sqrt(rho), and
    lam = l_1 - l_2 - l_3 - l_4 with C = max(0, lam).

    Eigenvalues below the relative spectral floor are snapped to exact
    zero before the square root; otherwise eigensolver noise of order eps
    would surface as spurious sqrt(eps)-sized roots on low-rank states.
    """
    rho = np.asarray(rho, dtype=complex)
    _check_density4(rho)
    root = sqrt_psd(rho, relative_zero=RELATIVE_SPECTRAL_ZERO)
    flipped = _SPIN_FLIP @ rho.conj() @ _SPIN_FLIP
    similar = root @ flipped @ root
    values = np.clip(herm_eig(0.5 * (similar + similar.conj().T))[0], 0.0, None)
    if values[0] > 0.0:
        values[values < RELATIVE_SPECTRAL_ZERO * values[0]] = 0.0
    roots = np.sqrt(values)
    lam = float(roots[0] - roots[1] - roots[2] - roots[3])
    return ConcurrenceResult(lam=lam, concurrence=max(0.0, lam), roots=roots)


def lambda_at(rho0, c1: Coupling, c2: Coupling, t: float) -> float:
    """lam of the pair state at a single time under independent couplings."""
    evolved = evolve_pair(rho0, kraus_of_coupling(c1, t), kraus_of_coupling(c2, t))
    return concurrence(evolved).lam


def default_grid(gamma: float = 1.0, span: float = 10.0, points: int = 400) -> np.ndarray:
    """Uniform time grid covering gamma*t in [0, span]."""
    return np.linspace(0.0, span / gamma, points)


def lambda_trajectory(rho0, c1: Coupling, c2: Coupling, grid) -> list[tuple[float, float, float]]:
    """(t, lam, concurrence) records along a strictly increasing grid from 0."""
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 1:
        raise ValueError("grid must be a non-empty 1-d array of times")
    if grid[0] != 0.0:
        raise ValueError("grid must start at t = 0")
    if grid.size > 1 and not np.all(np.diff(grid) > 0.0):
        raise ValueError("grid must be strictly increasing")
    rho0 = np.asarray(rho0, dtype=complex)
    records = []
    for t in grid:
        evolved = evolve_pair(
            rho0, kraus_of_coupling(c1, t), kraus_of_coupling(c2, t)
        )
        res = concurrence(evolved)
        records.append((float(t), res.lam, res.concurrence))
    return records
