"""Exact rational linear programming with machine-checkable certificates.

Two-phase primal simplex on a dense tableau, Bland's anti-cycling rule,
every number a :class:`fractions.Fraction`.  Outcomes always carry enough
data to be re-checked independently by :func:`verify`:

* ``OPTIMAL``   - primal point, objective value, and a dual vector with
  exact strong duality;
* ``INFEASIBLE`` - a Farkas ray: a sign-correct combination of the
  constraints proving emptiness;
* ``UNBOUNDED`` - a feasible point plus an improving recession direction.

Variables have lower bound 0 or are free; finite upper bounds are handled as
appended ``x_j <= u_j`` rows.  Certificates are indexed by the constraint
rows followed by those upper-bound rows (in variable order), and are
expressed with respect to the maximization form: for ``sense == "min"`` the
solver maximizes the negated objective and the dual vector refers to that
program, while ``objective_value`` is always in the original sense.
``verify`` applies the same canonicalization, so the two functions agree on
conventions without any shared state.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .caps import ensure_within_cap
from .errors import InputError
from .typespace import RationalLike, as_fraction

Relation = str  # "<=", "=", ">="
_RELATIONS = ("<=", "=", ">=")

Row = tuple[tuple[Fraction, ...], Relation, Fraction]


@dataclass(frozen=True)
class LinearProgram:
    """Immutable LP: optimize ``objective`` subject to rows and bounds.

    ``lower[j]`` is ``Fraction(0)`` or ``None`` (free variable);
    ``upper[j]`` is a finite Fraction or ``None`` (unbounded above).
    """

    objective: tuple[Fraction, ...]
    sense: str
    constraints: tuple[Row, ...]
    lower: tuple[Optional[Fraction], ...]
    upper: tuple[Optional[Fraction], ...]

    def __post_init__(self):
        if self.sense not in ("max", "min"):
            raise InputError(f"lp: sense must be 'max' or 'min', got {self.sense!r}")
        n = len(self.objective)
        if n == 0:
            raise InputError("lp: at least one variable required")
        if len(self.lower) != n or len(self.upper) != n:
            raise InputError("lp: bounds must match the number of variables")
        for lo in self.lower:
            if lo is not None and lo != 0:
                raise InputError("lp: lower bounds must be 0 or None (free)")
        for coeffs, rel, _rhs in self.constraints:
            if len(coeffs) != n:
                raise InputError(
                    f"lp: constraint has {len(coeffs)} coefficients, expected {n}"
                )
            if rel not in _RELATIONS:
                raise InputError(f"lp: unknown relation {rel!r}")

    @property
    def num_vars(self) -> int:
        return len(self.objective)

    @staticmethod
    def build(
        sense: str,
        objective: Sequence[RationalLike],
        constraints: Iterable[tuple[Sequence[RationalLike], Relation, RationalLike]] = (),
        free: Iterable[int] = (),
        upper: dict[int, RationalLike] | None = None,
    ) -> "LinearProgram":
        """Convenience constructor: ints allowed, bounds by exception lists.

        All variables default to lower bound 0 and no upper bound; indices in
        ``free`` become free, and ``upper`` maps indices to finite bounds.
        """
        obj = tuple(as_fraction(c) for c in objective)
        n = len(obj)
        rows = tuple(
            (tuple(as_fraction(c) for c in coeffs), rel, as_fraction(rhs))
            for coeffs, rel, rhs in constraints
        )
        free_set = set(free)
        lo = tuple(None if j in free_set else Fraction(0) for j in range(n))
        up_map = {j: as_fraction(u) for j, u in (upper or {}).items()}
        up = tuple(up_map.get(j) for j in range(n))
        return LinearProgram(obj, sense, rows, lo, up)


class LpStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LpOutcome:
    """Solver result plus certificate; see the module docstring for the
    certificate conventions."""

    status: LpStatus
    primal: Optional[tuple[Fraction, ...]] = None
    objective_value: Optional[Fraction] = None
    certificate: Optional[tuple[Fraction, ...]] = None
    ray: Optional[tuple[Fraction, ...]] = None


def _extended_rows(lp: LinearProgram) -> list[Row]:
    rows = list(lp.constraints)
    n = lp.num_vars
    for j, u in enumerate(lp.upper):
        if u is not None:
            unit = tuple(Fraction(1 if i == j else 0) for i in range(n))
            rows.append((unit, "<=", u))
    return rows


def _max_objective(lp: LinearProgram) -> tuple[Fraction, ...]:
    if lp.sense == "max":
        return lp.objective
    return tuple(-c for c in lp.objective)


class _Simplex:
    """One solve.  Internal variables are all >= 0 (free vars are split)."""

    def __init__(self, lp: LinearProgram):
        self.lp = lp
        ext = _extended_rows(lp)
        n = lp.num_vars
        ensure_within_cap(max(n, len(ext), 1), "lp dimensions")

        # Split free variables into positive and negative parts.
        self.cols: list[tuple[int, int]] = []  # (orig var, sign)
        for j in range(n):
            self.cols.append((j, 1))
            if lp.lower[j] is None:
                self.cols.append((j, -1))
        ncols = len(self.cols)
        maxobj = _max_objective(lp)
        self.cost = [sign * maxobj[j] for j, sign in self.cols]

        # Sign-normalize rows so every rhs is nonnegative.
        self.flip: list[int] = []
        self.rels: list[str] = []
        rows: list[list[Fraction]] = []
        rhs: list[Fraction] = []
        for coeffs, rel, b in ext:
            if b < 0:
                coeffs = tuple(-c for c in coeffs)
                b = -b
                rel = {"<=": ">=", ">=": "<=", "=": "="}[rel]
                self.flip.append(-1)
            else:
                self.flip.append(1)
            rows.append([sign * coeffs[j] for j, sign in self.cols])
            rhs.append(b)
            self.rels.append(rel)

        m = len(rows)
        self.m = m
        self.ncols = ncols
        # Column layout: structurals | slack/surplus | artificials | rhs.
        self.slack_col = [-1] * m
        self.art_col = [-1] * m
        width = ncols
        for i, rel in enumerate(self.rels):
            if rel in ("<=", ">="):
                self.slack_col[i] = width
                width += 1
        for i, rel in enumerate(self.rels):
            if rel in (">=", "="):
                self.art_col[i] = width
                width += 1
        self.width = width  # columns, excluding rhs slot
        self.artificials = {c for c in self.art_col if c >= 0}

        zero = Fraction(0)
        self.T: list[list[Fraction]] = []
        self.basis: list[int] = []
        self.row_id: list[int] = list(range(m))  # surviving row -> ext row index
        for i in range(m):
            row = rows[i] + [zero] * (width - ncols) + [rhs[i]]
            if self.slack_col[i] >= 0:
                row[self.slack_col[i]] = Fraction(1 if self.rels[i] == "<=" else -1)
            if self.art_col[i] >= 0:
                row[self.art_col[i]] = Fraction(1)
            self.T.append(row)
            self.basis.append(self.art_col[i] if self.art_col[i] >= 0 else self.slack_col[i])

    # -- tableau mechanics ---------------------------------------------------

    def _pivot(self, row: int, col: int) -> None:
        T = self.T
        prow = T[row]
        p = prow[col]
        if p == 0:
            raise AssertionError("simplex: pivot on zero entry")
        if p != 1:
            inv = 1 / p
            T[row] = prow = [v * inv for v in prow]
        for r, other in enumerate(T):
            if r == row:
                continue
            f = other[col]
            if f:
                T[r] = [a - f * b for a, b in zip(other, prow)]
        f = self.obj[col]
        if f:
            self.obj = [a - f * b for a, b in zip(self.obj, prow)]
        self.basis[row] = col

    def _set_objective(self, cost_by_col: dict[int, Fraction]) -> None:
        # obj[j] = reduced cost of column j; obj[-1] = -(objective value).
        zero = Fraction(0)
        obj = [cost_by_col.get(j, zero) for j in range(self.width)] + [zero]
        for i, b in enumerate(self.basis):
            cb = cost_by_col.get(b, zero)
            if cb:
                row = self.T[i]
                obj = [a - cb * v for a, v in zip(obj, row)]
        self.obj = obj

    def _iterate(self, banned: set[int]) -> Optional[int]:
        """Bland's rule until optimal (returns None) or unbounded
        (returns the entering column)."""
        guard = 0
        limit = 1000 + 50 * (self.m + self.width)
        while True:
            guard += 1
            if guard > limit:
                raise AssertionError("simplex: iteration limit exceeded")
            enter = -1
            for j in range(self.width):
                if j not in banned and self.obj[j] > 0:
                    enter = j
                    break
            if enter < 0:
                return None
            leave = -1
            best: Fraction | None = None
            for i, row in enumerate(self.T):
                coef = row[enter]
                if coef > 0:
                    ratio = row[-1] / coef
                    if best is None or ratio < best or (
                        ratio == best and self.basis[i] < self.basis[leave]
                    ):
                        best = ratio
                        leave = i
            if leave < 0:
                return enter
            self._pivot(leave, enter)

    # -- phases ---------------------------------------------------------------

    def solve(self) -> LpOutcome:
        if self.artificials:
            self._set_objective({c: Fraction(-1) for c in self.artificials})
            if self._iterate(banned=set()) is not None:
                raise AssertionError("simplex: phase 1 cannot be unbounded")
            if -self.obj[-1] < 0:
                return self._infeasible_outcome()
            self._purge_artificials()

        self._set_objective({j: c for j, c in enumerate(self.cost) if c})
        enter = self._iterate(banned=self.artificials)
        if enter is not None:
            return self._unbounded_outcome(enter)
        return self._optimal_outcome()

    def _purge_artificials(self) -> None:
        # Basic artificials sit at level zero; pivot them out or drop the
        # (linearly dependent) row.
        i = 0
        while i < len(self.T):
            if self.basis[i] in self.artificials:
                pivot_col = -1
                for j in range(self.width):
                    if j not in self.artificials and self.T[i][j] != 0:
                        pivot_col = j
                        break
                if pivot_col >= 0:
                    self._pivot(i, pivot_col)
                    i += 1
                else:
                    del self.T[i]
                    del self.basis[i]
                    del self.row_id[i]
            else:
                i += 1

    # -- outcome assembly ------------------------------------------------------

    def _internal_point(self) -> list[Fraction]:
        zero = Fraction(0)
        x = [zero] * self.width
        for i, b in enumerate(self.basis):
            x[b] = self.T[i][-1]
        return x

    def _to_original(self, internal: Sequence[Fraction]) -> tuple[Fraction, ...]:
        zero = Fraction(0)
        x = [zero] * self.lp.num_vars
        for col, (j, sign) in enumerate(self.cols):
            if internal[col]:
                x[j] += sign * internal[col]
        return tuple(x)

    def _duals(self, phase1: bool) -> tuple[Fraction, ...]:
        # Reduced cost of row i's unit column gives its dual value:
        # r = c_unit - y_i, with c_unit = -1 for phase-1 artificials, else 0.
        zero = Fraction(0)
        y_ext = [zero] * (len(self.flip))
        for pos, ext_i in enumerate(self.row_id):
            art = self.art_col[ext_i]
            if art >= 0:
                c_unit = Fraction(-1) if phase1 else zero
                y = c_unit - self.obj[art]
            else:
                y = -self.obj[self.slack_col[ext_i]]
            y_ext[ext_i] = self.flip[ext_i] * y
        return tuple(y_ext)

    def _infeasible_outcome(self) -> LpOutcome:
        return LpOutcome(status=LpStatus.INFEASIBLE, certificate=self._duals(phase1=True))

    def _unbounded_outcome(self, enter: int) -> LpOutcome:
        zero = Fraction(0)
        direction = [zero] * self.width
        direction[enter] = Fraction(1)
        for i, b in enumerate(self.basis):
            coef = self.T[i][enter]
            if coef:
                direction[b] = -coef
        return LpOutcome(
            status=LpStatus.UNBOUNDED,
            primal=self._to_original(self._internal_point()),
            ray=self._to_original(direction),
        )

    def _optimal_outcome(self) -> LpOutcome:
        value = -self.obj[-1]
        if self.lp.sense == "min":
            value = -value
        return LpOutcome(
            status=LpStatus.OPTIMAL,
            primal=self._to_original(self._internal_point()),
            objective_value=value,
            certificate=self._duals(phase1=False),
        )


def solve(lp: LinearProgram) -> LpOutcome:
    """Solve exactly; deterministic for identical input (fixed pivot rule)."""
    return _Simplex(lp).solve()


# -- independent certificate checking ------------------------------------------


def _row_value(coeffs: Sequence[Fraction], x: Sequence[Fraction]) -> Fraction:
    return sum((c * v for c, v in zip(coeffs, x) if c), Fraction(0))


def _satisfies(value: Fraction, rel: Relation, rhs: Fraction) -> bool:
    if rel == "<=":
        return value <= rhs
    if rel == ">=":
        return value >= rhs
    return value == rhs


def _point_feasible(lp: LinearProgram, ext: list[Row], x: Sequence[Fraction]) -> bool:
    if len(x) != lp.num_vars:
        return False
    for j, lo in enumerate(lp.lower):
        if lo is not None and x[j] < lo:
            return False
    return all(_satisfies(_row_value(coeffs, x), rel, rhs) for coeffs, rel, rhs in ext)


def _dual_signs_ok(ext: list[Row], y: Sequence[Fraction]) -> bool:
    for (_, rel, _), yi in zip(ext, y):
        if rel == "<=" and yi < 0:
            return False
        if rel == ">=" and yi > 0:
            return False
    return True


def verify(lp: LinearProgram, outcome: LpOutcome) -> bool:
    """Re-check every certificate condition in exact arithmetic.

    Independent of the solver: works only from the outcome fields and the
    program data.  Returns False on any mismatch, including malformed or
    missing fields; never raises for shape problems.
    """
    try:
        ext = _extended_rows(lp)
        cmax = _max_objective(lp)

        if outcome.status is LpStatus.OPTIMAL:
            x, y = outcome.primal, outcome.certificate
            if x is None or y is None or outcome.objective_value is None:
                return False
            if len(y) != len(ext) or not _point_feasible(lp, ext, x):
                return False
            original_value = _row_value(lp.objective, x)
            if original_value != outcome.objective_value:
                return False
            if not _dual_signs_ok(ext, y):
                return False
            for j in range(lp.num_vars):
                slack = (
                    sum((y[i] * ext[i][0][j] for i in range(len(ext)) if ext[i][0][j]), Fraction(0))
                    - cmax[j]
                )
                if lp.lower[j] is None:
                    if slack != 0:
                        return False
                elif slack < 0:
                    return False
            dual_value = sum((yi * rhs for yi, (_, _, rhs) in zip(y, ext) if yi), Fraction(0))
            max_value = original_value if lp.sense == "max" else -original_value
            return dual_value == max_value

        if outcome.status is LpStatus.INFEASIBLE:
            y = outcome.certificate
            if y is None or len(y) != len(ext):
                return False
            if not _dual_signs_ok(ext, y):
                return False
            for j in range(lp.num_vars):
                combo = sum(
                    (y[i] * ext[i][0][j] for i in range(len(ext)) if ext[i][0][j]), Fraction(0)
                )
                if lp.lower[j] is None:
                    if combo != 0:
                        return False
                elif combo < 0:
                    return False
            against = sum((yi * rhs for yi, (_, _, rhs) in zip(y, ext) if yi), Fraction(0))
            return against < 0

        if outcome.status is LpStatus.UNBOUNDED:
            x, d = outcome.primal, outcome.ray
            if x is None or d is None or len(d) != lp.num_vars:
                return False
            if not _point_feasible(lp, ext, x):
                return False
            for coeffs, rel, _ in ext:
                drift = _row_value(coeffs, d)
                if rel == "<=" and drift > 0:
                    return False
                if rel == ">=" and drift < 0:
                    return False
                if rel == "=" and drift != 0:
                    return False
            for j, lo in enumerate(lp.lower):
                if lo is not None and d[j] < 0:
                    return False
            return _row_value(cmax, d) > 0

        return False
    except (TypeError, IndexError, AttributeError):
        return False


__all__ = [
    "LinearProgram",
    "LpOutcome",
    "LpStatus",
    "Relation",
    "solve",
    "verify",
]
