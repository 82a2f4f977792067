"""Seeded random inputs and independent oracles shared across the test suite."""

from __future__ import annotations

import numpy as np

from qsde import Coupling, bloch_to_rho
from qsde.census import CouplingSample


def random_unit(rng: np.random.Generator) -> np.ndarray:
    while True:
        p = rng.normal(size=3)
        n = float(np.linalg.norm(p))
        if n > 1e-6:
            return p / n


def random_bloch(rng: np.random.Generator, surface: bool = False) -> np.ndarray:
    direction = random_unit(rng)
    if surface:
        return direction
    return direction * rng.random() ** (1.0 / 3.0)


def random_flip_coupling(rng: np.random.Generator, gamma: float = 1.0) -> Coupling:
    axis = random_unit(rng)
    psi = 2.0 * np.pi * rng.random()
    return Coupling(u=np.cos(psi) * axis, v=np.sin(psi) * axis, gamma=gamma)


def random_dissipative_coupling(
    rng: np.random.Generator, gamma: float = 1.0, min_w: float = 1e-2
) -> Coupling:
    while True:
        x = rng.random(5)
        s = CouplingSample.from_angles(
            float(x[0]),
            float(2.0 * np.pi * x[1]),
            float(2.0 * np.pi * x[2]),
            float(np.pi * x[3]),
            float(np.pi * x[4]),
        )
        if float(np.linalg.norm(np.cross(s.u, s.v))) > min_w:
            return Coupling(u=s.u, v=s.v, gamma=gamma)


def random_coupling(rng: np.random.Generator, gamma: float = 1.0) -> Coupling:
    if rng.random() < 0.5:
        return random_flip_coupling(rng, gamma)
    return random_dissipative_coupling(rng, gamma)


def random_density2(rng: np.random.Generator) -> np.ndarray:
    return bloch_to_rho(random_bloch(rng))


def pure_concurrence(psi: np.ndarray) -> float:
    """Independent oracle: a pure two-qubit state has C = 2 |c00 c11 - c01 c10|."""
    return 2.0 * abs(psi[0] * psi[3] - psi[1] * psi[2])


def random_pure_pair(
    rng: np.random.Generator, min_concurrence: float = 0.05
) -> tuple[np.ndarray, np.ndarray]:
    """Random entangled pure state; returns (rho, psi)."""
    while True:
        psi = rng.normal(size=4) + 1j * rng.normal(size=4)
        psi /= np.linalg.norm(psi)
        if pure_concurrence(psi) >= min_concurrence:
            return np.outer(psi, psi.conj()), psi


def random_unitary2(rng: np.random.Generator) -> np.ndarray:
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(a)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_hermitian(rng: np.random.Generator, d: int = 4) -> np.ndarray:
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return a + a.conj().T


def master_rhs(r: np.ndarray, c: Coupling) -> np.ndarray:
    """Right-hand side of the Bloch master equation, written independently."""
    u, v, g = c.u, c.v, c.gamma
    w = np.cross(u, v)
    return 4.0 * g * (u * float(u @ r) + v * float(v @ r) + 2.0 * w - r)
