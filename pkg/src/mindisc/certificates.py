"""Optimality certificates for minimum-error discrimination measurements.

A measurement maximizes the success probability exactly when every witness
operator G_j = sym(Gamma) - p_j rho_j is positive semidefinite, where
Gamma = sum_i p_i rho_i pi_i; Hermiticity of Gamma and the equality
conditions pi_j (p_j rho_j - p_k rho_k) pi_k = 0 follow at any optimum.
The certificate bundles all of these residuals with a verdict at a stated
tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ensembles import Ensemble
from .matrices import as_matrix, hermitize, readonly, spectral_decompose
from .povm import Povm, check_match, p_correct

DEFAULT_TOL = 1e-7


@dataclass(frozen=True)
class Witness:
    """Improvable direction: an outcome whose witness operator dips negative."""

    outcome: int
    eigenvalue: float
    vector: np.ndarray


@dataclass(frozen=True)
class Certificate:
    """All optimality residuals for one (ensemble, POVM) pair.

    ``is_optimal`` is True iff every witness minimum eigenvalue is at least
    ``-tolerance`` and the Lagrange-operator Hermiticity residual is at most
    ``tolerance``.  When False, ``witness`` carries the globally most
    negative eigenpair across outcomes.
    """

    p_corr: float
    lagrange_herm_residual: float
    witness_min_eigenvalues: tuple[float, ...]
    pairwise_equality_residual: float
    zero_product_residual: float
    tolerance: float
    is_optimal: bool
    witness: Witness | None

    @property
    def p_err(self) -> float:
        return 1.0 - self.p_corr


def lagrange_operator(ens: Ensemble, povm: Povm) -> np.ndarray:
    """sum_i p_i rho_i pi_i, returned raw (unsymmetrized).

    Its trace equals the success probability for any valid POVM; it is
    Hermitian only at an optimum, so callers interested in the symmetric
    part must hermitize it themselves.
    """
    check_match(ens, povm)
    acc = np.zeros((ens.dim, ens.dim), dtype=complex)
    for i in range(len(ens)):
        acc += ens.weighted(i) @ povm[i]
    return acc


def witness_operator(ens: Ensemble, povm: Povm, j: int) -> np.ndarray:
    """G_j = (1/2) sum_i p_i (rho_i pi_i + pi_i rho_i) - p_j rho_j."""
    check_match(ens, povm)
    if not 0 <= j < len(ens):
        raise IndexError(f"outcome {j} out of range for {len(ens)} outcomes")
    return hermitize(lagrange_operator(ens, povm)) - ens.weighted(j)


def hermiticity_residual(m) -> float:
    """Frobenius anti-Hermitian residual, scaled by max(1, ||m||_F)."""
    arr = as_matrix(m)
    return float(np.linalg.norm(arr - arr.conj().T) / max(1.0, np.linalg.norm(arr)))


def pairwise_equality_residual(ens: Ensemble, povm: Povm) -> float:
    """max over ordered pairs (j, k) of ||pi_j (p_j rho_j - p_k rho_k) pi_k||_F."""
    check_match(ens, povm)
    weighted = [ens.weighted(i) for i in range(len(ens))]
    worst = 0.0
    for j in range(len(ens)):
        for k in range(len(ens)):
            residual = povm[j] @ (weighted[j] - weighted[k]) @ povm[k]
            worst = max(worst, float(np.linalg.norm(residual)))
    return worst


def zero_product_residual(ens: Ensemble, povm: Povm) -> float:
    """max_k ||(sym(Gamma) - p_k rho_k) pi_k||_F; vanishes at any optimum."""
    check_match(ens, povm)
    symmetric = hermitize(lagrange_operator(ens, povm))
    worst = 0.0
    for k in range(len(ens)):
        residual = (symmetric - ens.weighted(k)) @ povm[k]
        worst = max(worst, float(np.linalg.norm(residual)))
    return worst


def certify(
    ens: Ensemble, povm: Povm, tol: float = DEFAULT_TOL, strict: bool = False
) -> Certificate:
    """Evaluate the full optimality certificate at tolerance ``tol``.

    With ``strict=True`` the verdict additionally requires both equality
    residuals to sit below ``tol``; by default they are reported but not
    gated on, since positivity of the witnesses already implies them.
    """
    if tol <= 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    check_match(ens, povm)
    raw = lagrange_operator(ens, povm)
    herm_residual = hermiticity_residual(raw)
    symmetric = hermitize(raw)

    minima: list[float] = []
    worst: Witness | None = None
    for j in range(len(ens)):
        value, vector = spectral_decompose(symmetric - ens.weighted(j)).pair(0)
        minima.append(value)
        if worst is None or value < worst.eigenvalue:
            worst = Witness(outcome=j, eigenvalue=value, vector=readonly(vector))

    eq_residual = pairwise_equality_residual(ens, povm)
    zp_residual = zero_product_residual(ens, povm)
    optimal = min(minima) >= -tol and herm_residual <= tol
    if strict:
        optimal = optimal and eq_residual <= tol and zp_residual <= tol

    return Certificate(
        p_corr=p_correct(ens, povm),
        lagrange_herm_residual=herm_residual,
        witness_min_eigenvalues=tuple(minima),
        pairwise_equality_residual=eq_residual,
        zero_product_residual=zp_residual,
        tolerance=float(tol),
        is_optimal=optimal,
        witness=None if optimal else worst,
    )
