"""Parity-split eigenvalues of -d^2/dq^2 + V(q) on the real line.

Even potentials split into two half-line problems on [0, L]: a Neumann
condition at the origin (even states, imposed through a ghost-point
reflection that keeps the matrix symmetric) and a Dirichlet condition
(odd states).  Each is discretized by second-order central differences;
the lowest eigenvalues come out of LAPACK's Sturm-sequence bisection for
symmetric tridiagonal matrices, and a Richardson step in the mesh removes
the h^2 error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad
from scipy.linalg import eigvalsh_tridiagonal
from scipy.optimize import brentq

from .errors import AccuracyError, DomainError, ModelError
from .potential import PotentialSpec

DEFAULT_MAX_COUNT = 512
_AGMON_BUDGET = 40.0
_MAX_POINTS = 3_000_000


@dataclass(frozen=True)
class EigenEntry:
    k: int
    parity: str        # "even" | "odd"
    value: float
    err_est: float


@dataclass(frozen=True)
class SolverParams:
    L: float
    h: float
    n: int
    extrapolation_order: int


@dataclass(frozen=True)
class SpectrumResult:
    entries: tuple[EigenEntry, ...]
    params: SolverParams

    def values(self) -> np.ndarray:
        return np.array([e.value for e in self.entries])

    def parity_values(self, parity: str) -> np.ndarray:
        return np.array([e.value for e in self.entries if e.parity == parity])

    def __len__(self) -> int:
        return len(self.entries)


def half_line_eigenvalues(spec: PotentialSpec, parity: str, count: int,
                          L: float, n: int, bisect_tol: float = 1e-12) -> np.ndarray:
    """Raw (unextrapolated) eigenvalues of one parity sector at mesh L/n.

    ``bisect_tol`` is handed to the LAPACK Sturm bisection as an absolute
    interval width; the driver default scales with the matrix norm (1/h^2)
    and would drown the Richardson differences on fine meshes.
    """
    h = L / n
    if parity == "even":
        q = np.arange(0, n) * h
        d = 2.0 / h**2 + spec.value(q)
        e = np.full(n - 1, -1.0 / h**2)
        e[0] = -math.sqrt(2.0) / h**2   # ghost-point reflection, symmetrized
    elif parity == "odd":
        q = np.arange(1, n) * h
        d = 2.0 / h**2 + spec.value(q)
        e = np.full(n - 2, -1.0 / h**2)
    else:
        raise DomainError(f"unknown parity {parity!r}")
    return eigvalsh_tridiagonal(d, e, select="i", select_range=(0, count - 1),
                                lapack_driver="stebz", tol=bisect_tol)


def _bs_count(spec: PotentialSpec, lam: float) -> float:
    """Bohr-Sommerfeld estimate of the number of states below lam."""
    if lam <= spec.value(0.0):
        return 0.0
    qt = turning_point(spec, lam)
    integral, _ = quad(lambda q: math.sqrt(max(lam - spec.value(q), 0.0)),
                       0.0, qt, epsrel=1e-8, limit=200)
    return 2.0 * integral / math.pi - 0.5


def turning_point(spec: PotentialSpec, lam: float) -> float:
    if lam <= spec.value(0.0):
        raise DomainError("level below the potential minimum")
    hi = 1.0
    while spec.value(hi) < lam:
        hi *= 2.0
    return brentq(lambda q: spec.value(q) - lam, 0.0, hi, xtol=1e-12)


def bs_level_estimate(spec: PotentialSpec, k: int) -> float:
    """Rough Bohr-Sommerfeld inversion one level above the k-th eigenvalue."""
    lo = spec.value(0.0) + 1e-9
    hi = max(1.0, 2.0 * abs(lo))
    while _bs_count(spec, hi) < k + 1.0:
        hi *= 2.0
    return brentq(lambda lam: _bs_count(spec, lam) - (k + 1.0), lo, hi, rtol=1e-6)


def bs_level(spec: PotentialSpec, k: float) -> float:
    """Bohr-Sommerfeld eigenvalue model, continuous in the index.

    Solves 2 int sqrt(lam - V) dq = (k + 1/2) pi; the relative error falls
    like (2k+1)^{-2}, which makes it the tail model of choice for products
    and sums over high levels of coupled potentials (a local power-law fit
    extrapolates with a curvature bias through the crossover region).
    """
    def phase(lam):
        qt = turning_point(spec, lam)
        integral, _ = quad(lambda q: math.sqrt(max(lam - spec.value(q), 0.0)),
                           0.0, qt, epsrel=1e-10, limit=300)
        return 2.0 * integral / math.pi - 0.5 - k

    lo = spec.value(0.0) + 1e-12
    hi = max(1.0, 2.0 * abs(lo))
    while phase(hi) < 0.0:
        hi *= 2.0
    return brentq(phase, lo, hi, rtol=1e-10)


def choose_box(spec: PotentialSpec, count: int) -> tuple[float, float]:
    """Box size L such that the top requested level is buried under the
    Agmon decay budget, and the level estimate it was based on."""
    lam_top = 1.15 * bs_level_estimate(spec, count + 2) + 5.0
    qt = turning_point(spec, lam_top)
    L = 1.2 * qt + 1.0
    while True:
        decay, _ = quad(lambda q: math.sqrt(max(spec.value(q) - lam_top, 0.0)),
                        qt, L, epsrel=1e-6, limit=200)
        if decay >= _AGMON_BUDGET:
            break
        L *= 1.15
    return L, lam_top


def eigenvalues(spec: PotentialSpec, count: int, tol: float = 1e-6,
                max_count: int = DEFAULT_MAX_COUNT) -> SpectrumResult:
    """First ``count`` eigenvalues with parity labels and error estimates.

    Solves the two half-line problems at meshes h and h/2 and Richardson-
    extrapolates; the per-level error estimate is the (conservative)
    extrapolation correction.  Raises AccuracyError with the best estimate
    attached when the tolerance is unreachable at the mesh cap.
    """
    if count < 1:
        raise DomainError("count must be positive")
    if count > max_count:
        raise DomainError(f"count {count} exceeds the configured cap {max_count}")
    return _eigenvalues_cached(spec, count, float(tol))


@lru_cache(maxsize=64)
def _eigenvalues_cached(spec: PotentialSpec, count: int, tol: float) -> SpectrumResult:
    n_even = count - count // 2
    n_odd = count // 2
    L, lam_top = choose_box(spec, count)
    bisect_tol = min(1e-12 * max(1.0, lam_top), 0.01 * tol)

    # initial mesh from the h^4 error model of the extrapolated values,
    # floored so the top mode keeps >= 16 points per wavelength
    c4 = 0.3 * lam_top**3 / 360.0 + 1.0
    h0 = (15.0 * tol / c4) ** 0.25
    h0 = min(h0, 2.0 * math.pi / math.sqrt(lam_top) / 16.0, L / 256.0)
    n = 2 ** math.ceil(math.log2(L / (2.0 * h0)))

    def solve(npts):
        return (half_line_eigenvalues(spec, "even", n_even, L, npts, bisect_tol),
                half_line_eigenvalues(spec, "odd", n_odd, L, npts, bisect_tol))

    coarse = solve(n)
    extrap = None
    best = None
    while n <= _MAX_POINTS:
        n *= 2
        fine = solve(n)
        new_extrap = ((4.0 * fine[0] - coarse[0]) / 3.0,
                      (4.0 * fine[1] - coarse[1]) / 3.0)
        if extrap is not None:
            # consecutive extrapolants differ by ~15x the residual h^4 error
            err_ev = np.abs(new_extrap[0] - extrap[0]) / 15.0
            err_od = np.abs(new_extrap[1] - extrap[1]) / 15.0
            worst = max(err_ev.max(), err_od.max())
            best = _assemble(spec, count, new_extrap[0], err_ev,
                             new_extrap[1], err_od, L, n)
            if worst <= tol:
                return best
        coarse = fine
        extrap = new_extrap

    raise AccuracyError(
        f"eigenvalue tolerance {tol} unreachable at {_MAX_POINTS} mesh points",
        best_estimate=best, err_est=float(worst) if best is not None else None)


def _assemble(spec, count, ev, err_ev, od, err_od, L, n) -> SpectrumResult:
    entries = []
    for k in range(count):
        if k % 2 == 0:
            value, err = ev[k // 2], err_ev[k // 2]
            parity = "even"
        else:
            value, err = od[k // 2], err_od[k // 2]
            parity = "odd"
        entries.append(EigenEntry(k, parity, float(value),
                                  max(float(err), 1e-15 * abs(float(value)), 1e-300)))
    values = [e.value for e in entries]
    if any(b <= a for a, b in zip(values, values[1:])):
        raise AccuracyError("parity interlacing violated; refine the mesh",
                            best_estimate=None)
    params = SolverParams(L=L, h=L / n, n=n, extrapolation_order=2)
    return SpectrumResult(tuple(entries), params)


@dataclass(frozen=True)
class TailModel:
    """Power-law model lam_k ~ c (2k+1)^exponent for the high levels."""

    c: float
    exponent: float
    k_start: int

    def level(self, k) -> float:
        return self.c * (2.0 * np.asarray(k, dtype=float) + 1.0) ** self.exponent


def eigenvalue_tail_model(spec: PotentialSpec, spectrum: SpectrumResult,
                          rel_band: float = 0.05) -> TailModel:
    """Least-squares fit of log lam_k against log(2k+1) on the top half.

    The fitted exponent is checked against the Bohr-Sommerfeld growth: for a
    pure power q^N it must sit within ``rel_band`` of 2N/(N+2); a coupled
    potential is accepted anywhere between the growth of its two exponents
    (its computed range may still sit in the crossover region).
    """
    m = len(spectrum)
    if m < 32:
        raise DomainError("need at least 32 computed eigenvalues")
    k0 = m // 2
    ks = np.arange(k0, m)
    lam = spectrum.values()[k0:]
    if np.any(lam <= 0.0):
        raise ModelError("nonpositive eigenvalues in the fit window")
    x = np.log(2.0 * ks + 1.0)
    y = np.log(lam)
    A = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    exponent, logc = float(coef[0]), float(coef[1])
    resid = y - A @ coef
    rms = float(np.sqrt(np.mean(resid**2)))
    if rms > 0.02:
        raise ModelError(f"tail fit residual too large (rms {rms:.3g})")

    p_top = 2.0 * spec.N / (spec.N + 2.0)
    pure_power = spec.v == 0.0 and spec.lam == 0.0
    if pure_power:
        if abs(exponent - p_top) > rel_band * p_top:
            raise ModelError(
                f"fitted exponent {exponent:.4f} not within {rel_band:.0%} of {p_top:.4f}")
    else:
        m_eff = spec.M if spec.v > 0.0 and spec.M >= 2 else spec.N
        p_low = 2.0 * m_eff / (m_eff + 2.0)
        lo = min(p_low, p_top) * (1.0 - rel_band)
        hi = max(p_low, p_top) * (1.0 + rel_band)
        if not (lo <= exponent <= hi):
            raise ModelError(
                f"fitted exponent {exponent:.4f} outside the growth band "
                f"[{lo:.4f}, {hi:.4f}]")
    return TailModel(c=math.exp(logc), exponent=exponent, k_start=m)
