"""Ground truth for the feasible-λ interval that does not use the dioid solver.

Feasibility at a fixed λ is a plain positive-circuit check on the numeric
matrix ``λP ⊕ λ⁻¹I ⊕ C``.  The interval bounds come from bracketing that
predicate, using the convexity of the feasible set.  LP1/LP2 can also be
exported in CPLEX LP text format for external solvers.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field
from typing import IO

import numpy as np

from .graph import has_positive_circuit
from .maxplus import EPS, mcm, scalar_mat_mul
from .solver import EMPTY, LambdaInterval, ProblemInstance

# Per-arc relaxation slack; absorbs rounding at non-representable λ.
FEAS_TOL = 1e-9
HORIZON = 2.0**60
SCAN_RADIUS = 2.0**10

_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def feasible_at(inst: ProblemInstance, lam: float, tol: float = FEAS_TOL) -> bool:
    """True iff ``G(λP ⊕ λ⁻¹I ⊕ C)`` has no positive circuit."""
    if not math.isfinite(lam):
        raise ValueError(f"lambda must be finite, got {lam}")
    return not has_positive_circuit(inst.matrix_at(lam), tol)


def laurent_matrix(coeffs: Mapping[int, np.ndarray], lam: float) -> np.ndarray:
    """``⊕_j λ^j A_j`` at a fixed finite ``lam``."""
    out = None
    for j, A in coeffs.items():
        term = scalar_mat_mul(j * lam, np.asarray(A, dtype=np.float64))
        out = term if out is None else np.maximum(out, term)
    return out


def laurent_feasible_at(coeffs: Mapping[int, np.ndarray], lam: float, tol: float = FEAS_TOL) -> bool:
    return not has_positive_circuit(laurent_matrix(coeffs, lam), tol)


def _golden_min(f: Callable[[float], float], a: float, b: float, width: float) -> float:
    """Minimiser of a convex ``f`` on ``[a, b]`` to within ``width``."""
    c, d = b - _PHI * (b - a), a + _PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > width:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _PHI * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def _edge(feasible: Callable[[float], bool], seed: float, direction: float, tol: float, horizon: float) -> float:
    """Boundary of the feasible run containing ``seed`` in one direction."""
    inside, step = seed, 1.0
    while True:
        probe = seed + direction * step
        if abs(probe) > horizon:
            return direction * math.inf
        if not feasible(probe):
            break
        inside, step = probe, 2.0 * step
    outside = probe
    while abs(outside - inside) >= tol:
        mid = 0.5 * (inside + outside)
        if feasible(mid):
            inside = mid
        else:
            outside = mid
    return inside


def bracket_feasible_set(
    matrix_at: Callable[[float], np.ndarray],
    window: tuple[float, float],
    tol: float,
    horizon: float = HORIZON,
    feas_tol: float = FEAS_TOL,
) -> LambdaInterval:
    """Feasible interval of a parametric matrix whose arc weights are convex in λ.

    The circuit-mean function ``λ -> mcm(matrix_at(λ))`` is convex, so its
    minimiser over ``window`` is a feasible seed whenever any feasible λ
    exists there, even if the feasible set is a single point.  From the seed
    each endpoint is found by doubling steps and then bisection down to
    ``tol``.  An endpoint beyond ``horizon`` is reported as ±inf.
    """

    def feasible(lam: float) -> bool:
        return not has_positive_circuit(matrix_at(lam), feas_tol)

    lo_w, hi_w = window
    width = max(1e-12, 1e-13 * max(abs(lo_w), abs(hi_w)))
    seed = _golden_min(lambda lam: mcm(matrix_at(lam)), lo_w, hi_w, width)
    candidates = [seed, lo_w, hi_w]
    seed = next((c for c in candidates if feasible(c)), None)
    if seed is None:
        return EMPTY
    return LambdaInterval(_edge(feasible, seed, -1.0, tol, horizon), _edge(feasible, seed, 1.0, tol, horizon))


def search_window(inst: ProblemInstance) -> tuple[float, float] | None:
    """Finite part of the necessary window ``[mcm(I), -mcm(P)]``; None if empty."""
    lo, hi = mcm(inst.I), -mcm(inst.P)
    if lo > hi:
        return None
    if math.isinf(lo) and math.isinf(hi):
        return -SCAN_RADIUS, SCAN_RADIUS
    if math.isinf(lo):
        return hi - SCAN_RADIUS, hi
    if math.isinf(hi):
        return lo, lo + SCAN_RADIUS
    return lo, hi


def bisection_bounds(inst: ProblemInstance, tol: float = 1e-9, horizon: float = HORIZON) -> LambdaInterval:
    """Feasible interval of ``inst`` located by bracketing ``feasible_at``.

    Endpoints are accurate to ``tol`` on the feasible side.  When both
    circuit means of P and I are ``-inf`` the seed search only covers
    ``[-2**10, 2**10]``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    window = search_window(inst)
    if window is None:
        return EMPTY
    return bracket_feasible_set(inst.matrix_at, window, tol, horizon)


def laurent_bisection_bounds(
    coeffs: Mapping[int, np.ndarray], tol: float = 1e-9, horizon: float = HORIZON
) -> LambdaInterval:
    """Feasible interval of ``G(⊕_j λ^j A_j)`` evaluated directly, without expansion."""
    return bracket_feasible_set(lambda lam: laurent_matrix(coeffs, lam), (-SCAN_RADIUS, SCAN_RADIUS), tol, horizon)


# -- LP1 / LP2 -------------------------------------------------------------------

_KIND_ORDER = {"P": 0, "I": 1, "C": 2}
_LAMBDA_COEF = {"P": -1, "I": 1, "C": 0}


@dataclass
class LpModel:
    """LP over ``x_1..x_n`` and λ: one row ``x_i - x_j + c·λ >= w`` per finite entry.

    ``c`` is -1 for P entries, +1 for I entries and 0 for C entries.
    """

    n: int
    sense: str
    constraints: list[tuple[str, int, int, float]] = field(default_factory=list)

    def lambda_coef(self, kind: str) -> int:
        return _LAMBDA_COEF[kind]


def build_lp(inst: ProblemInstance, objective: str = "minimize") -> LpModel:
    if objective not in ("minimize", "maximize"):
        raise ValueError(f"objective must be 'minimize' or 'maximize', got {objective!r}")
    rows = []
    for kind in ("P", "I", "C"):
        M = getattr(inst, kind)
        for i, j in zip(*np.nonzero(M != EPS)):
            rows.append((kind, int(i) + 1, int(j) + 1, float(M[i, j])))
    rows.sort(key=lambda r: (_KIND_ORDER[r[0]], r[1], r[2]))
    return LpModel(inst.n, objective, rows)


def _num(v: float) -> str:
    return repr(float(v) + 0.0)


def _row(kind: str, i: int, j: int, lam_coef: int) -> str:
    terms = []
    if i != j:
        terms += [f"+ x{i}", f"- x{j}"]
    if lam_coef:
        terms.append(("+ " if lam_coef > 0 else "- ") + "lam")
    if not terms:
        terms.append(f"0 x{i}")
    expr = " ".join(terms)
    return expr[2:] if expr.startswith("+ ") else expr


def write_lp_file(model: LpModel, sink: IO[str]) -> None:
    """Serialise ``model`` in CPLEX LP format with all variables free."""
    out = [
        "\\ feasible-lambda bound for G(lam P + lam^-1 I + C)",
        "Minimize" if model.sense == "minimize" else "Maximize",
        " obj: lam",
        "Subject To",
    ]
    for kind, i, j, w in model.constraints:
        out.append(f" {kind}_{i}_{j}: {_row(kind, i, j, model.lambda_coef(kind))} >= {_num(w)}")
    out.append("Bounds")
    out += [f" x{k} free" for k in range(1, model.n + 1)]
    out.append(" lam free")
    out.append("End")
    sink.write("\n".join(out) + "\n")
