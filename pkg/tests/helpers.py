"""Shared construction helpers for the test suite."""

from __future__ import annotations

import numpy as np

import mindisc as md


def random_hermitian(rng: np.random.Generator, dim: int) -> np.ndarray:
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (a + a.conj().T) / 2


def random_complex(rng: np.random.Generator, dim: int) -> np.ndarray:
    return rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))


def random_instance(seed: int, dim: int, n: int) -> tuple[md.Ensemble, md.Povm]:
    """Seeded random ensemble plus an independent random POVM."""
    ens = md.random_mixed(dim, n, seed=seed)
    povm = md.random_povm(n, dim, np.random.default_rng(seed + 10_000_019))
    return ens, povm


def suboptimal_mode_instance(seed: int, dim: int = 2, n: int = 3, min_lam: float = 0.01):
    """Random instance whose most negative witness eigenvalue is at least min_lam.

    Returns (ensemble, povm, mode); scans successive seeds until one
    qualifies, so a fixed seed yields a fixed instance.
    """
    probe = seed
    while True:
        ens, povm = random_instance(probe, dim, n)
        mode = md.find_negative_mode(ens, povm)
        if mode is not None and mode.lam >= min_lam:
            return ens, povm, mode
        probe += 1_000_003
