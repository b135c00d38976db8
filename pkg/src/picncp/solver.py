"""Exact feasible-λ interval for the parametric graph G(λP ⊕ λ⁻¹I ⊕ C).

The two branch algorithms restrict λ to one side of a pivot ``rho`` and
reduce the problem to max-circuit-mean computations on
``C*·I·C*·S*`` and ``C*·P·C*·S*``, where ``S`` is built by ``n // 2`` rounds
of ``S <- P S² I ⊕ I S² P ⊕ E``.  Both are O(n⁴) time and keep only a fixed
number of n×n matrices alive.
"""

from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass, field

import numpy as np

from .graph import certificate, has_positive_circuit
from .maxplus import (
    EPS,
    DimensionError,
    as_matrix,
    check_no_top,
    identity,
    kleene_star,
    mat_chain,
    mat_otimes,
    mcm,
    scalar_mat_mul,
    zeros,
)

# Slack used only when certifying at a λ that is not exactly representable.
CERT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class ProblemInstance:
    """The matrices of proportional, inverse and constant arc weights."""

    P: np.ndarray
    I: np.ndarray  # noqa: E741
    C: np.ndarray

    def __post_init__(self):
        mats = []
        for name in ("P", "I", "C"):
            M = as_matrix(getattr(self, name))
            check_no_top(M)
            M.setflags(write=False)
            object.__setattr__(self, name, M)
            mats.append(M)
        if not (mats[0].shape == mats[1].shape == mats[2].shape):
            raise DimensionError("P, I and C must share one square shape")

    @property
    def n(self) -> int:
        return self.P.shape[0]

    def __eq__(self, other):
        if not isinstance(other, ProblemInstance):
            return NotImplemented
        return all(np.array_equal(getattr(self, k), getattr(other, k)) for k in "PIC")

    def matrix_at(self, lam: float) -> np.ndarray:
        """``λP ⊕ λ⁻¹I ⊕ C`` for a finite ``lam``."""
        return np.maximum(np.maximum(scalar_mat_mul(lam, self.P), scalar_mat_mul(-lam, self.I)), self.C)


@dataclass(frozen=True)
class LambdaInterval:
    """Closed interval ``[lo, hi] ∩ R``; endpoints may be ±inf."""

    lo: float = -math.inf
    hi: float = math.inf
    is_empty: bool = False

    def __post_init__(self):
        if self.is_empty:
            object.__setattr__(self, "lo", math.inf)
            object.__setattr__(self, "hi", -math.inf)
            return
        if not self.lo <= self.hi:
            raise ValueError(f"lo > hi in non-empty interval: [{self.lo}, {self.hi}]")
        # drop negative zeros so equal intervals compare and print the same
        object.__setattr__(self, "lo", float(self.lo) + 0.0)
        object.__setattr__(self, "hi", float(self.hi) + 0.0)

    @classmethod
    def empty(cls) -> LambdaInterval:
        return cls(is_empty=True)

    def __contains__(self, lam: float) -> bool:
        return not self.is_empty and math.isfinite(lam) and self.lo <= lam <= self.hi

    def intersect(self, other: LambdaInterval) -> LambdaInterval:
        if self.is_empty or other.is_empty:
            return EMPTY
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        # [x, x] with x = ±inf holds no real number
        if lo > hi or (lo == hi and math.isinf(lo)):
            return EMPTY
        return LambdaInterval(lo, hi)

    def union(self, other: LambdaInterval) -> LambdaInterval:
        """Union of two intervals that must touch or overlap."""
        if self.is_empty:
            return other
        if other.is_empty:
            return self
        if max(self.lo, other.lo) > min(self.hi, other.hi):
            raise RuntimeError(f"disconnected union of {self} and {other}; feasible sets are convex")
        return LambdaInterval(min(self.lo, other.lo), max(self.hi, other.hi))

    def __str__(self):
        if self.is_empty:
            return "∅"
        return f"[{self.lo:g}, {self.hi:g}]"


EMPTY = LambdaInterval.empty()


@dataclass
class BranchTrace:
    side: str
    rho: float
    P_tilde: np.ndarray | None = None
    I_tilde: np.ndarray | None = None
    S: np.ndarray | None = None
    S_star: np.ndarray | None = None
    lo: float | None = None
    hi: float | None = None
    result: LambdaInterval = EMPTY
    reason: str = ""


@dataclass
class SolveReport:
    solution: LambdaInterval
    rho: float
    branches: tuple[str, ...]
    mcm_p: float
    mcm_i: float
    intermediate: dict[str, BranchTrace] | None = None
    certificate_lambda: tuple[float, np.ndarray] | None = None
    branch_results: dict[str, LambdaInterval] = field(default_factory=dict)


def s_iterate(P_t: np.ndarray, I_t: np.ndarray, k: int) -> np.ndarray:
    """``k`` rounds of ``S <- P S² I ⊕ I S² P ⊕ E`` starting from ``S = E``."""
    E = identity(P_t.shape[0])
    S = E
    for _ in range(k):
        S2 = mat_otimes(S, S)
        S = np.maximum(mat_chain(P_t, S2, I_t), mat_chain(I_t, S2, P_t))
        np.maximum(S, E, out=S)
    return S


def _interval(lo: float, hi: float) -> LambdaInterval:
    return EMPTY if lo > hi else LambdaInterval(lo, hi).intersect(LambdaInterval())


def _branch(inst: ProblemInstance, rho: float, side: str, record: bool) -> tuple[LambdaInterval, BranchTrace | None]:
    if not math.isfinite(rho):
        raise ValueError(f"rho must be finite, got {rho}")
    trace = BranchTrace(side, rho) if record else None
    P, I, C = inst.P, inst.I, inst.C
    if has_positive_circuit(C):
        if trace:
            trace.reason = "G(C) has a positive circuit"
        return EMPTY, trace

    pivot = identity(inst.n)
    if side == "le":
        P = np.maximum(P, scalar_mat_mul(-rho, pivot))
    else:
        I = np.maximum(I, scalar_mat_mul(rho, pivot))
    C_star = kleene_star(C, check=False)
    P_t = mat_chain(C_star, P, C_star)
    I_t = mat_chain(C_star, I, C_star)
    del P, I, C_star
    S = s_iterate(P_t, I_t, inst.n // 2)
    if trace:
        trace.P_tilde, trace.I_tilde, trace.S = P_t, I_t, S
    if has_positive_circuit(S):
        if trace:
            trace.reason = "G(S) has a positive circuit"
        return EMPTY, trace

    S_star = kleene_star(S, check=False)
    lo = mcm(mat_otimes(I_t, S_star))
    hi = -mcm(mat_otimes(P_t, S_star))
    result = _interval(lo, hi)
    if trace:
        trace.S_star, trace.lo, trace.hi, trace.result = S_star, lo, hi, result
    return result, trace


def algorithm1(inst: ProblemInstance, rho: float) -> LambdaInterval:
    """All feasible ``λ <= rho``."""
    return _branch(inst, rho, "le", False)[0]


def algorithm2(inst: ProblemInstance, rho: float) -> LambdaInterval:
    """All feasible ``λ >= rho``."""
    return _branch(inst, rho, "ge", False)[0]


def _snap_up(x: float) -> float:
    return math.ceil(2.0 * x) / 2.0


def _snap_down(x: float) -> float:
    return math.floor(2.0 * x) / 2.0


def choose_rho(mcm_p: float, mcm_i: float) -> tuple[float, tuple[str, ...]]:
    """Pivot and branch set that cover the whole feasible set.

    Every feasible λ lies in ``[mcm(I), -mcm(P)]``, so any pivot at or above
    ``-mcm(P)`` makes the ``le`` branch complete (and symmetrically for
    ``ge``).  The pivot is rounded outward to a multiple of 1/2 so it adds no
    rounding error on half-integer data.
    """
    if mcm_p != EPS:
        return _snap_up(-mcm_p), ("le",)
    if mcm_i != EPS:
        return _snap_down(mcm_i), ("ge",)
    return 0.0, ("le", "ge")


def _pick_lambda(iv: LambdaInterval) -> float:
    lo, hi = iv.lo, iv.hi
    if math.isinf(lo) and math.isinf(hi):
        return 0.0
    if math.isinf(lo):
        mid = hi - 1.0
    elif math.isinf(hi):
        mid = lo + 1.0
    else:
        mid = 0.5 * (lo + hi)
    grid = round(mid * 1024.0) / 1024.0
    return grid if lo <= grid <= hi else mid


def solve(
    inst: ProblemInstance,
    *,
    rho: float | None = None,
    branch: str = "auto",
    record: bool = False,
    certify: bool = False,
) -> SolveReport:
    """Feasible-λ interval of ``inst``.

    Args:
        rho: pivot override.  With ``branch="auto"`` an explicit pivot runs
            both branches.
        branch: ``"auto"``, ``"le"``, ``"ge"`` or ``"both"``.  ``"le"`` and
            ``"ge"`` alone return only the part of the feasible set on that
            side of the pivot.
        record: keep per-branch intermediate matrices in the report.
        certify: attach a sample feasible λ with its potential vector.
    """
    mcm_p, mcm_i = mcm(inst.P), mcm(inst.I)
    auto_rho, auto_branches = choose_rho(mcm_p, mcm_i)
    if branch == "auto":
        branches = auto_branches if rho is None else ("le", "ge")
    elif branch == "both":
        branches = ("le", "ge")
    elif branch in ("le", "ge"):
        branches = (branch,)
    else:
        raise ValueError(f"unknown branch {branch!r}")
    if rho is None:
        rho = auto_rho

    solution = EMPTY
    traces: dict[str, BranchTrace] = {}
    results: dict[str, LambdaInterval] = {}
    for side in branches:
        part, trace = _branch(inst, rho, side, record)
        results[side] = part
        if trace is not None:
            traces[side] = trace
        solution = solution.union(part)

    report = SolveReport(
        solution=solution,
        rho=rho,
        branches=branches,
        mcm_p=mcm_p,
        mcm_i=mcm_i,
        intermediate=traces if record else None,
        branch_results=results,
    )
    if certify and not solution.is_empty:
        lam = _pick_lambda(solution)
        report.certificate_lambda = (lam, certificate(inst.matrix_at(lam), tol=CERT_TOL))
    return report


# -- degenerate fast paths ----------------------------------------------------

def solve_p_eps(I: np.ndarray, C: np.ndarray, rho: float) -> tuple[LambdaInterval, LambdaInterval]:  # noqa: E741
    """Both branch intervals for ``P = 𝓔`` in O(n³)."""
    I, C = as_matrix(I), as_matrix(C)
    if has_positive_circuit(C):
        return EMPTY, EMPTY
    n = C.shape[0]
    C_star = kleene_star(C, check=False)

    M = np.maximum(scalar_mat_mul(-rho, I), C)
    if has_positive_circuit(M):
        le = EMPTY
    else:
        M_star = kleene_star(M, check=False)
        lo = mcm(mat_chain(C_star, I, M_star))
        hi = -mcm(scalar_mat_mul(-rho, M_star))
        le = _interval(lo, hi)

    lo = mcm(mat_otimes(C_star, np.maximum(I, scalar_mat_mul(rho, identity(n)))))
    ge = _interval(lo, math.inf)
    return le, ge


def solve_i_eps(P: np.ndarray, C: np.ndarray, rho: float) -> tuple[LambdaInterval, LambdaInterval]:
    """Both branch intervals for ``I = 𝓔`` in O(n³)."""
    P, C = as_matrix(P), as_matrix(C)
    if has_positive_circuit(C):
        return EMPTY, EMPTY
    n = C.shape[0]
    C_star = kleene_star(C, check=False)

    hi = -mcm(mat_otimes(C_star, np.maximum(P, scalar_mat_mul(-rho, identity(n)))))
    le = _interval(-math.inf, hi)

    M = np.maximum(scalar_mat_mul(rho, P), C)
    if has_positive_circuit(M):
        ge = EMPTY
    else:
        M_star = kleene_star(M, check=False)
        lo = mcm(scalar_mat_mul(rho, M_star))
        hi = -mcm(mat_chain(C_star, P, M_star))
        ge = _interval(lo, hi)
    return le, ge


# -- Laurent polynomials -------------------------------------------------------

def laurent_expand(coeffs: Mapping[int, np.ndarray]) -> ProblemInstance:
    """Rewrite ``⊕_j λ^j A_j`` as an equivalent P/I/C instance.

    Exponents -1, 0, 1 go straight into I, C, P.  For ``|j| >= 2`` a chain
    of ``|j| - 1`` auxiliary blocks (one copy of every node per block)
    replaces each arc ``u -> v`` of ``A_j`` by a path of ``|j|`` arcs, each
    carrying one factor λ (or λ⁻¹); the last arc carries ``A_j[v, u]``.
    Circuits of the expanded graph map one-to-one onto circuits of the
    Laurent graph with the same weight at every λ.
    """
    mats = {int(j): as_matrix(A) for j, A in coeffs.items()}
    if not mats:
        raise ValueError("no coefficients given")
    shapes = {A.shape for A in mats.values()}
    if len(shapes) != 1:
        raise DimensionError(f"coefficient shapes differ: {sorted(shapes)}")
    n = shapes.pop()[0]
    long_terms = sorted(j for j, A in mats.items() if abs(j) >= 2 and (A != EPS).any())
    N = n + n * sum(abs(j) - 1 for j in long_terms)

    P, I, C = zeros(N), zeros(N), zeros(N)
    for j, target in ((1, P), (-1, I), (0, C)):
        if j in mats:
            target[:n, :n] = mats[j]
    link = identity(n)
    offset = n
    for j in long_terms:
        target = P if j > 0 else I
        prev = slice(0, n)
        for _ in range(abs(j) - 1):
            block = slice(offset, offset + n)
            target[block, prev] = link
            prev = block
            offset += n
        target[:n, prev] = mats[j]
    return ProblemInstance(P, I, C)
