"""Signed mixtures of product laws: existence made concrete on a grid.

Every exchangeable law on a finite alphabet is a *signed* combination of
product laws.  This module searches for such a combination with the product
parameters restricted to the rational grid of a given depth, minimizing
total variation (the l1 norm of the weights), and reports exactly what it
found: the atoms, their total variation, and - through :func:`reconstruct` -
the exact law they reproduce.

A total variation of 1 means the mixture is an honest probability mixture;
anything above 1 quantifies how far the law is from being one *on that
grid*.  No claim is made that the grid optimum equals the infimum over the
whole simplex.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .caps import ensure_within_cap
from .errors import InputError, RepresentationError
from .measures import ExchangeableLaw, simplex_grid
from .ratlp import LinearProgram, LpStatus, solve
from .symmetrize import SymmetricFunction, expectation
from .typespace import TypeVector, as_fraction, enumerate_types, type_count

Atom = tuple[Fraction, tuple[Fraction, ...]]


@dataclass(frozen=True)
class SignedMixture:
    """Finitely many product-law atoms with rational weights of either sign.

    ``total_mass`` is 1 whenever the mixture represents a probability law
    (the representation integrates the constant); ``total_variation`` is the
    certificate of how much cancellation the representation needed.
    """

    atoms: tuple[Atom, ...]

    def __post_init__(self):
        clean: list[Atom] = []
        width = None
        for weight, theta in self.atoms:
            weight = as_fraction(weight)
            theta = tuple(as_fraction(t) for t in theta)
            if width is None:
                width = len(theta)
            elif len(theta) != width:
                raise InputError("mixture: atoms over different alphabets")
            if any(t < 0 for t in theta) or sum(theta) != 1:
                raise InputError("mixture: atom parameter is not a probability vector")
            if weight:
                clean.append((weight, theta))
        object.__setattr__(self, "atoms", tuple(clean))

    @property
    def total_variation(self) -> Fraction:
        return sum((abs(w) for w, _ in self.atoms), Fraction(0))

    @property
    def total_mass(self) -> Fraction:
        return sum((w for w, _ in self.atoms), Fraction(0))

    @property
    def width(self) -> int:
        return len(self.atoms[0][1]) if self.atoms else 0


def _moment_rows(thetas: Sequence[tuple[Fraction, ...]], n: int, k: int):
    """Type weights of each grid product law, as dense rows per type."""
    from .extend import _product_type_weights  # sparse multinomial helper

    mus = enumerate_types(k, n)
    mu_index = {mu: r for r, mu in enumerate(mus)}
    rows = [[Fraction(0)] * len(thetas) for _ in mus]
    for v, theta in enumerate(thetas):
        for tv, w in _product_type_weights(theta, n).items():
            if w:
                rows[mu_index[tv]][v] = w
    return mus, rows


def signed_mixture(P: ExchangeableLaw, grid_depth: int) -> SignedMixture:
    """Minimum-total-variation signed mixture of grid product laws.

    Solves: minimize the l1 norm of the weights subject to reproducing every
    type weight of ``P`` exactly, over product parameters with coordinates
    ``j/d``.  If the grid cannot represent ``P`` the depth is doubled, up to
    four refinements; running out raises :class:`RepresentationError`
    carrying the last infeasibility certificate (existence over the full
    simplex is guaranteed, so failure only ever indicts the grid).
    """
    if grid_depth < 1:
        raise InputError("signed_mixture: grid_depth must be >= 1")
    k, n = P.alphabet.size, P.n
    depth = grid_depth
    last_farkas = None
    for _ in range(5):
        ensure_within_cap(type_count(k, depth), "simplex grid")
        thetas = simplex_grid(k, depth)
        mus, rows = _moment_rows(thetas, n, k)
        natoms = len(thetas)
        # Variables: positive parts then negative parts of each atom weight.
        constraints = tuple(
            (tuple(rows[r]) + tuple(-c for c in rows[r]), "=", P.weight(mu))
            for r, mu in enumerate(mus)
        )
        lp = LinearProgram.build("min", [1] * (2 * natoms), constraints)
        out = solve(lp)
        if out.status is LpStatus.OPTIMAL:
            atoms = []
            for v, theta in enumerate(thetas):
                weight = out.primal[v] - out.primal[natoms + v]
                if weight:
                    atoms.append((weight, theta))
            return SignedMixture(tuple(atoms))
        last_farkas = out.certificate
        depth *= 2
    raise RepresentationError(
        f"signed_mixture: no representation up to grid depth {depth // 2}",
        grid_depth=depth // 2,
        farkas=last_farkas,
    )


def reconstruct(mix: SignedMixture, n: int) -> dict[TypeVector, Fraction]:
    """Evaluate the signed combination on every mass-``n`` type class.

    Pure linear algebra: entries may land outside [0, 1] for arbitrary
    mixtures; whether the result is a law is the caller's check.  Zero
    entries are dropped, so comparing against ``law.weights`` is exact.
    """
    from .extend import _product_type_weights

    if not mix.atoms:
        raise InputError("reconstruct: mixture has no atoms")
    if n < 1:
        raise InputError("reconstruct: n must be >= 1")
    acc: dict[TypeVector, Fraction] = {}
    for weight, theta in mix.atoms:
        for tv, w in _product_type_weights(theta, n).items():
            if w:
                acc[tv] = acc.get(tv, Fraction(0)) + weight * w
    return {tv: v for tv, v in sorted(acc.items()) if v}


@dataclass(frozen=True)
class TvBound:
    """Ratio ``|E_P g| / max_grid |I(g, theta)|`` with its caveats.

    ``value`` is None when the grid denominator vanished while the
    numerator did not (an infinite bound: the grid is degenerate for this
    ``g``).  ``grid_only`` records that the denominator maximum was taken
    over the grid, not the whole simplex; the ratio is a certified lower
    bound on the total variation of any representing mixture only when the
    simplex maximum is attained on the grid.
    """

    value: Optional[Fraction]
    infinite: bool
    grid_depth: int
    grid_only: bool = True


def tv_lower_bound(
    P: ExchangeableLaw, g: SymmetricFunction, grid_depth: int = 4
) -> TvBound:
    """Grid estimate of the representation-norm lower bound for one ``g``.

    The numerator is exact; the denominator ``max |I(g, theta)|`` scans the
    product laws on the grid, so the reported ratio may overshoot the true
    bound when the simplex maximum falls between grid points - hence the
    ``grid_only`` flag on the result.
    """
    from .extend import _product_type_weights

    if P.alphabet != g.alphabet or P.n != g.m:
        raise InputError("tv_lower_bound: law and function are not compatible")
    if grid_depth < 1:
        raise InputError("tv_lower_bound: grid_depth must be >= 1")
    numerator = abs(expectation(P, g))
    denominator = Fraction(0)
    for theta in simplex_grid(P.alphabet.size, grid_depth):
        value = Fraction(0)
        for tv, w in _product_type_weights(theta, P.n).items():
            gv = g.values[tv]
            if w and gv:
                value += w * gv
        denominator = max(denominator, abs(value))
    if denominator == 0:
        if numerator == 0:
            return TvBound(Fraction(0), infinite=False, grid_depth=grid_depth)
        return TvBound(None, infinite=True, grid_depth=grid_depth)
    return TvBound(numerator / denominator, infinite=False, grid_depth=grid_depth)


__all__ = [
    "SignedMixture",
    "TvBound",
    "reconstruct",
    "signed_mixture",
    "tv_lower_bound",
]
