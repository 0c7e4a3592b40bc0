"""Positive (multi-)gradings and enumeration of their finite fibers."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .exceptions import CapExceeded, NoPositiveGrading


@dataclass(frozen=True)
class Grading:
    """Integer weight rows; the first row is strictly positive.

    ``deg(x)`` is the tuple of row products ``row . x``.
    """

    weights: tuple

    def __post_init__(self):
        rows = np.atleast_2d(np.asarray(self.weights, dtype=object))
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if not rows or any(x < 1 for x in rows[0]):
            raise ValueError(f"first grading row must be strictly positive, got {rows[:1]}")
        if len({len(r) for r in rows}) != 1:
            raise ValueError("grading rows have different lengths")
        object.__setattr__(self, "weights", rows)

    @property
    def n(self):
        return len(self.weights[0])

    @property
    def primary(self):
        return self.weights[0]

    def degree(self, x):
        return tuple(sum(w * v for w, v in zip(row, x)) for row in self.weights)

    def to_list(self):
        return [list(r) for r in self.weights]


def as_grading(g) -> Grading:
    return g if isinstance(g, Grading) else Grading(g)


def find_positive_grading(A, c_max: int = 4) -> Grading:
    """A strictly positive vector in the row space of ``A``.

    Tries the sum of the nonnegative rows first, then small nonnegative
    integer combinations of all rows (coefficients ``0..c_max``), smallest
    coefficient sum first.
    """
    A = np.asarray(A, dtype=np.int64)
    if A.ndim == 1:
        A = A[None, :]
    nonneg = [r for r in A if (r >= 0).all()]
    if nonneg:
        s = np.sum(nonneg, axis=0)
        if (s > 0).all():
            return Grading([s.tolist()])
    m = A.shape[0]
    combos = sorted(itertools.product(range(c_max + 1), repeat=m), key=lambda c: (sum(c), c))
    for c in combos:
        if not any(c):
            continue
        v = np.asarray(c, dtype=np.int64) @ A
        if (v > 0).all():
            return Grading([v.tolist()])
    raise NoPositiveGrading(f"no combination of rows with coefficients <= {c_max} is positive")


def check_homogeneous(moves, g) -> bool:
    """True iff every grading row is orthogonal to every move.

    Moves may be signed vectors or ``(head, tail)`` pairs.
    """
    g = as_grading(g)
    for m in moves:
        if len(m) == 2 and not isinstance(m[0], (int, np.integer)):
            m = tuple(a - b for a, b in zip(m[0], m[1]))
        if any(sum(w * x for w, x in zip(row, m)) != 0 for row in g.weights):
            return False
    return True


def make_positive_multigrading(A, g) -> Grading:
    """Rows ``a_r + k_r g`` with minimal ``k_r >= 1`` making each row positive.

    The first output row is ``g`` itself.
    """
    g = np.asarray(as_grading(g).primary, dtype=np.int64)
    rows = [g.tolist()]
    for a in np.atleast_2d(np.asarray(A, dtype=np.int64)):
        k = 1
        while ((a + k * g) < 1).any():
            k += 1
        rows.append((a + k * g).tolist())
    return Grading(rows)


def fiber_enumerate(g, degree, cap: int = 1_000_000) -> list:
    """All ``x >= 0`` with ``deg(x) == degree``, in lexicographic order.

    Backtracks on the positive first row; the remaining rows are checked at
    the leaves.  Raises :class:`CapExceeded` beyond ``cap`` results.
    """
    g = as_grading(g)
    if isinstance(degree, (int, np.integer)):
        degree = (int(degree),)
    degree = tuple(int(d) for d in degree)
    if len(degree) != len(g.weights):
        if len(degree) == 1 and len(g.weights) > 1:
            raise ValueError("degree needs one entry per grading row")
        raise ValueError(f"degree has {len(degree)} entries, grading has {len(g.weights)} rows")
    w = g.primary
    n = g.n
    others = g.weights[1:]
    out = []
    x = [0] * n

    def rec(k, rem):
        if k == n - 1:
            if rem % w[k]:
                return
            x[k] = rem // w[k]
            if all(sum(r[i] * x[i] for i in range(n)) == d for r, d in zip(others, degree[1:])):
                out.append(tuple(x))
                if len(out) > cap:
                    raise CapExceeded("fiber", cap, len(out))
            return
        # lexicographic: ascending values of the leading coordinate
        for v in range(rem // w[k] + 1):
            x[k] = v
            rec(k + 1, rem - v * w[k])
        x[k] = 0

    if degree[0] >= 0:
        rec(0, degree[0])
    return out
