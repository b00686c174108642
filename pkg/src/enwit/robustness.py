"""Exact generalized robustness of two-qubit states, with certificates.

The primal problem is

    minimize  Tr(X)   subject to  X >= 0,  (rho + X)^PT >= 0,

whose value equals R_g(rho) for two qubits because there the states with
positive partial transpose are exactly the separable ones.  Its dual is

    maximize  -Tr(W rho)   subject to  W <= I,  W^PT >= 0,

so every solve returns both a mixing operator and a witness; the duality
gap between them certifies the answer.  The solver is a plain log-barrier
Newton method on the 16 real parameters of X: at this size nothing more
elaborate is warranted, and the certificate invariants (not the algorithm)
are the contract.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import NumericalError
from .operators import (
    DensityMatrix,
    HermitianOperator,
    _partial_transpose_entries,
)

GAP_TOL = 1e-5
FEAS_TOL = 1e-9
PPT_MARGIN_TOL = 1e-10

_TWO_QUBIT_DIMS = (2, 2)
_PT_BLOCK = (1,)

_MU_START = 1.0
_MU_FLOOR = 1e-9
_EARLY_EXIT_GAP = 1e-6
_CENTER_TOL = 1e-10  # Newton decrement^2 / 2


@dataclass(frozen=True)
class RobustnessCertificate:
    """A primal/dual pair bracketing R_g within ``duality_gap``."""

    rg_value: float
    primal_mixing: HermitianOperator
    dual_witness: HermitianOperator
    duality_gap: float


@dataclass(frozen=True)
class EntanglementCheck:
    """PPT verdict: ``margin`` is the smallest partial-transpose eigenvalue."""

    entangled: bool
    margin: float


def _require_two_qubits(rho: DensityMatrix) -> None:
    if rho.shape.local_dims != _TWO_QUBIT_DIMS:
        raise ValueError(
            "exact robustness is only available for two qubits, where PPT equals "
            f"separability; got shape {rho.shape.local_dims}"
        )


def _pt(mat: np.ndarray) -> np.ndarray:
    return _partial_transpose_entries(mat, _TWO_QUBIT_DIMS, _PT_BLOCK)


def _hermitian_basis(d: int) -> np.ndarray:
    """Orthonormal real basis of d x d Hermitian matrices, stacked (d^2, d, d)."""
    mats = []
    for i in range(d):
        m = np.zeros((d, d), dtype=np.complex128)
        m[i, i] = 1.0
        mats.append(m)
    inv_sqrt2 = 1.0 / np.sqrt(2.0)
    for i in range(d):
        for j in range(i + 1, d):
            m = np.zeros((d, d), dtype=np.complex128)
            m[i, j] = m[j, i] = inv_sqrt2
            mats.append(m)
            m = np.zeros((d, d), dtype=np.complex128)
            m[i, j] = 1j * inv_sqrt2
            m[j, i] = -1j * inv_sqrt2
            mats.append(m)
    return np.stack(mats)


_BASIS = _hermitian_basis(4)
_PT_BASIS = np.stack([_pt(b) for b in _BASIS])
_TRACE_VEC = np.einsum("kii->k", _BASIS).real
# flattened views: _B_FLAT maps coefficients to matrices, _BT traces against them
_B_FLAT = _BASIS.reshape(16, 16)
_PB_FLAT = _PT_BASIS.reshape(16, 16)
_BT = np.ascontiguousarray(_BASIS.transpose(0, 2, 1).reshape(16, 16))
_PBT = np.ascontiguousarray(_PT_BASIS.transpose(0, 2, 1).reshape(16, 16))


def _to_coeffs(m: np.ndarray) -> np.ndarray:
    return (_BT @ m.reshape(16)).real


def _chol_logdet(m: np.ndarray) -> Optional[float]:
    """log det of a Hermitian matrix if positive definite, else None."""
    try:
        ell = np.linalg.cholesky(m)
    except np.linalg.LinAlgError:
        return None
    return 2.0 * float(np.log(np.diagonal(ell).real).sum())


def _inv_herm(m: np.ndarray) -> np.ndarray:
    out = np.linalg.inv(m)
    return (out + out.conj().T) / 2.0


def _barrier_value(t: float, x: np.ndarray, pt_rho: np.ndarray) -> float:
    xm = (x @ _B_FLAT).reshape(4, 4)
    s = pt_rho + (x @ _PB_FLAT).reshape(4, 4)
    ld_x = _chol_logdet(xm)
    ld_s = _chol_logdet(s)
    if ld_x is None or ld_s is None:
        return np.inf
    return float(t * (x @ _TRACE_VEC) - ld_x - ld_s)


def _dual_candidate(s: np.ndarray, t: float, rho_mat: np.ndarray) -> tuple[np.ndarray, float]:
    """Feasible dual witness from the current slack block, and its objective.

    PT(S^-1)/t satisfies the stationarity split I = X^-1/t + PT(S^-1)/t at a
    centered point; scaling by the top eigenvalue enforces W <= I exactly
    even when centering is inexact, and leaves PT(W) >= 0 untouched.
    """
    w = _pt(_inv_herm(s)) / t
    w = (w + w.conj().T) / 2.0
    top = float(np.linalg.eigvalsh(w)[-1])
    if top > 1.0:
        w = w / top
    dual = float(-np.einsum("ij,ji->", w, rho_mat).real)
    return w, dual


def rg_exact_2q(
    rho: DensityMatrix,
    trace: Optional[list] = None,
) -> RobustnessCertificate:
    """Generalized robustness of a two-qubit state with a primal/dual certificate.

    ``trace``, when given, collects one ``(barrier_t, primal, dual)`` triple
    per outer stage; the dual entries are feasible, so weak duality can be
    checked on every iterate.  Raises :class:`NumericalError` if the duality
    gap cannot be closed below 1e-5.
    """
    _require_two_qubits(rho)
    rho_mat = rho.entries
    pt_rho = _pt(rho_mat)

    start = max(0.0, -float(np.linalg.eigvalsh(pt_rho)[0])) + 0.5
    x = _to_coeffs(start * np.eye(4, dtype=np.complex128))

    best: Optional[tuple[float, float, np.ndarray, np.ndarray]] = None
    t = 1.0 / _MU_START
    t_final = 1.0 / _MU_FLOOR
    while t <= t_final * (1.0 + 1e-9):
        for _ in range(60):
            xm = (x @ _B_FLAT).reshape(4, 4)
            s = pt_rho + (x @ _PB_FLAT).reshape(4, 4)
            xi = _inv_herm(xm)
            si = _inv_herm(s)
            grad = t * _TRACE_VEC - (_BT @ xi.reshape(16)).real - (_PBT @ si.reshape(16)).real
            t1 = np.matmul(xi, np.matmul(_BASIS, xi))
            h1 = (t1.reshape(16, 16) @ _BT.T).real
            t2 = np.matmul(si, np.matmul(_PT_BASIS, si))
            h2 = (t2.reshape(16, 16) @ _PBT.T).real
            hess = h1 + h2
            try:
                step = np.linalg.solve(hess, -grad)
            except np.linalg.LinAlgError:
                step = np.linalg.solve(hess + 1e-10 * np.trace(hess) * np.eye(16), -grad)
            decrement_sq = float(-grad @ step)
            if not np.isfinite(decrement_sq) or decrement_sq < 0:
                step = np.linalg.solve(hess + 1e-10 * np.trace(hess) * np.eye(16), -grad)
                decrement_sq = max(0.0, float(-grad @ step))
            if decrement_sq / 2.0 <= _CENTER_TOL:
                break
            f0 = _barrier_value(t, x, pt_rho)
            alpha = 1.0
            slope = float(grad @ step)
            for _ in range(70):
                x_new = x + alpha * step
                f_new = _barrier_value(t, x_new, pt_rho)
                if np.isfinite(f_new) and f_new <= f0 + 1e-2 * alpha * slope:
                    x = x_new
                    break
                alpha *= 0.5
            else:
                raise NumericalError("robustness solver line search stalled")

        xm = (x @ _B_FLAT).reshape(4, 4)
        s = pt_rho + (x @ _PB_FLAT).reshape(4, 4)
        primal = float(x @ _TRACE_VEC)
        w, dual = _dual_candidate(s, t, rho_mat)
        if trace is not None:
            trace.append((t, primal, dual))
        if best is None or (primal - dual) < (best[0] - best[1]):
            best = (primal, dual, xm.copy(), w.copy())
        if primal - dual <= _EARLY_EXIT_GAP:
            break
        t *= 10.0

    assert best is not None
    primal, dual, xm, w = best
    gap = primal - dual
    if gap > GAP_TOL:
        raise NumericalError(
            f"robustness solver did not converge: duality gap {gap:.3e} > {GAP_TOL}"
        )
    _check_certificate(rho_mat, xm, w)
    rg = max(0.0, (primal + dual) / 2.0)
    shape = rho.shape
    return RobustnessCertificate(
        rg_value=rg,
        primal_mixing=HermitianOperator(shape, xm),
        dual_witness=HermitianOperator(shape, w),
        duality_gap=gap,
    )


def _check_certificate(rho_mat: np.ndarray, xm: np.ndarray, w: np.ndarray) -> None:
    checks = {
        "primal mixing not PSD": float(np.linalg.eigvalsh(xm)[0]),
        "mixed state not PPT": float(np.linalg.eigvalsh(_pt(rho_mat + xm))[0]),
        "witness above identity": 1.0 - float(np.linalg.eigvalsh(w)[-1]),
        "witness partial transpose not PSD": float(np.linalg.eigvalsh(_pt(w))[0]),
    }
    for label, margin in checks.items():
        if margin < -FEAS_TOL:
            raise NumericalError(f"certificate check failed: {label} (margin {margin:.3e})")


def rg_pure(schmidt: Sequence[float]) -> float:
    """Closed-form robustness of a pure bipartite state: (sum of coefficients)^2 - 1."""
    lam = np.asarray(schmidt, dtype=float)
    if lam.size < 1:
        raise ValueError("need at least one Schmidt coefficient")
    if np.any(lam < 0):
        raise ValueError("Schmidt coefficients must be nonnegative")
    if abs(float(np.sum(lam**2)) - 1.0) > 1e-10:
        raise ValueError("Schmidt coefficients must have unit square sum")
    return float(np.sum(lam)) ** 2 - 1.0


def is_entangled_2q(rho: DensityMatrix) -> EntanglementCheck:
    """PPT test for two qubits; the margin is min eig of the partial transpose."""
    _require_two_qubits(rho)
    margin = float(np.linalg.eigvalsh(_pt(rho.entries))[0])
    return EntanglementCheck(entangled=margin < -PPT_MARGIN_TOL, margin=margin)
