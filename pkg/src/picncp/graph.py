"""Precedence-graph view of max-plus matrices.

Circuit detection is Bellman-Ford on the longest-path side, which is the
same computation as negative-cycle detection on negated weights.  A virtual
source with 0-weight arcs to every node covers all components at once.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .maxplus import EPS, PositiveCircuitError, check_no_top, kleene_star


@dataclass(frozen=True)
class PrecedenceGraph:
    """Arc list of ``G(A)``.  Nodes are numbered ``1..n``.

    Each arc is ``(source, target, weight)``; the arc ``j -> i`` exists iff
    ``A[i, j]`` is not ε and then carries weight ``A[i, j]``.
    """

    n: int
    arcs: list[tuple[int, int, float]] = field(default_factory=list)


def from_matrix(A: np.ndarray) -> PrecedenceGraph:
    targets, sources = np.nonzero(A != EPS)
    order = np.lexsort((targets, sources))
    arcs = [(int(sources[k]) + 1, int(targets[k]) + 1, float(A[targets[k], sources[k]])) for k in order]
    return PrecedenceGraph(A.shape[0], arcs)


def _relax(A: np.ndarray, tol: float, track: bool):
    """Run up to ``n`` Jacobi rounds of longest-path relaxation.

    Returns ``(positive, history)`` where ``history`` holds, per round, the
    improved mask and argmax predecessors (only when ``track`` is set).
    """
    check_no_top(A)
    n = A.shape[0]
    d = np.zeros(n)
    history = []
    for _ in range(n):
        W = A + d[None, :]
        cand = W.max(axis=1)
        improved = cand > d + tol
        if not improved.any():
            return False, history
        if track:
            history.append((improved, W.argmax(axis=1)))
        d = np.where(improved, cand, d)
    return True, history


def has_positive_circuit(A: np.ndarray, tol: float = 0.0) -> bool:
    """True iff ``G(A)`` has a circuit of weight ``> 0``.

    A circuit of weight exactly 0 is not positive.  ``tol`` ignores
    relaxations that gain no more than ``tol`` per arc; it is only meant for
    absorbing rounding noise when ``A`` was built from a non-representable
    parameter value.

    Raises:
        TopEntryError: ``A`` contains +inf.
    """
    positive, _ = _relax(A, tol, track=False)
    return positive


def circuit_weight(A: np.ndarray, circuit: list[int]) -> float:
    """Weight of the closed walk ``circuit[0] -> circuit[1] -> ... -> circuit[0]``."""
    nxt = circuit[1:] + circuit[:1]
    return float(sum(A[b, a] for a, b in zip(circuit, nxt)))


def find_positive_circuit(A: np.ndarray, tol: float = 0.0) -> list[int] | None:
    """An elementary positive circuit of ``G(A)`` as a 0-based node list, or None.

    The node that still improves in round ``n`` ends a walk of exactly ``n``
    arcs; that walk repeats a node and at least one of the circuits it
    decomposes into is positive, otherwise a shorter walk would do as well.
    """
    positive, history = _relax(A, tol, track=True)
    if not positive:
        return None
    improved, _ = history[-1]
    cur = int(np.flatnonzero(improved)[0])
    back = [cur]
    for mask, pred in reversed(history):
        if mask[cur]:
            cur = int(pred[cur])
            back.append(cur)
    walk = back[::-1]

    best, best_w = None, -np.inf
    stack: list[int] = []
    for node in walk:
        if node in stack:
            pos = stack.index(node)
            circuit = stack[pos:]
            w = circuit_weight(A, circuit)
            if w > tol:
                return circuit
            if w > best_w:
                best, best_w = circuit, w
            del stack[pos + 1:]
        else:
            stack.append(node)
    return best


def satisfies(A: np.ndarray, x: np.ndarray) -> bool:
    """Check ``x ⪰ A ⊗ x`` for a finite vector ``x``."""
    Ax = (A + x[None, :]).max(axis=1)
    return bool(np.all(x >= Ax))


def certificate(A: np.ndarray, tol: float = 0.0) -> np.ndarray:
    """A finite ``x`` with ``x ⪰ A ⊗ x``, namely the row maxima of ``A*``.

    Every row of ``A*`` has a 0 on the diagonal, so ``x`` is finite.

    Raises:
        PositiveCircuitError: ``G(A)`` is not in Γ.
    """
    if has_positive_circuit(A, tol):
        raise PositiveCircuitError("G(A) has a positive circuit")
    return kleene_star(A, check=False).max(axis=1)
