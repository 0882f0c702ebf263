"""Extendibility decisions: norm, witness or refutation, infinite probing.

The questions answered here, all exactly:

* ``norm_EN(P, N)`` - the norm of the linear functional sending the
  mass-``N`` symmetrization of ``g`` to ``E_P g``.  It is 1 exactly when
  ``P`` is the length-``n`` marginal of some exchangeable law on length
  ``N``, and grows past 1 the moment that fails.
* ``check_extendible(P, N)`` - decide N-extendibility and hand back either
  an extension law (witness) or a symmetric function violating the norm
  bound (refutation); both sides are machine-checkable.
* ``probe_infinite`` - sweep N upward looking for a refutation, then try to
  certify infinite extendibility by writing ``P`` as a nonnegative mixture
  of product laws on a rational grid.
* ``covariance_bound`` - the classical pairwise-covariance necessary
  condition under a numeric embedding of the alphabet.

The witness search is a pure feasibility LP (variables: type weights of the
extension; rows: the marginal identities), and the norm is the optimum of
the same data read the other way: the minimum total variation of a signed
combination of urn measures reproducing ``P``.  Infeasibility certificates
(Farkas rays) convert directly into refutations.

Two exact constructive fast paths run before the LP: the triangular
inversion transport of ``P`` (when its coefficients happen to be
nonnegative they already form a witness) and, for pair laws, "staircase
peeling" into prefix-uniform product laws (which covers laws whose pair
matrix depends only on the larger symbol index).  Every fast-path witness
is verified against the marginal identities before being trusted.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, NamedTuple, Optional, Sequence

from .caps import ensure_within_cap
from .errors import InputError
from .measures import (
    ExchangeableLaw,
    invert_urn,
    marginalize,
    multiset_count,
    simplex_grid,
    urn_coefficient,
)
from .ratlp import LinearProgram, LpStatus, solve
from .symmetrize import SymmetricFunction, apply_U, expectation, sup_norm
from .typespace import (
    Alphabet,
    RationalLike,
    TypeVector,
    _make_type,
    as_fraction,
    enumerate_types,
    subtypes,
    type_count,
)

Atom = tuple[Fraction, tuple[Fraction, ...]]


class Verdict(enum.Enum):
    EXTENDIBLE = "extendible"
    NOT_EXTENDIBLE = "not_extendible"


class InfiniteOutcome(enum.Enum):
    CERTIFIED_INFINITE = "certified_infinite"
    REFUTED_AT = "refuted_at"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class ExtendReport:
    """Verdict for one target length, with its certificate.

    Extendible reports carry a witness law whose marginals reproduce ``P``
    exactly; non-extendible ones carry a refutation ``g`` with
    ``E_P g > sup |U g|`` (normalized so the sup is exactly 1) and the norm
    strictly above 1.
    """

    N: int
    verdict: Verdict
    norm: Fraction
    witness: Optional[ExchangeableLaw] = None
    refutation: Optional[SymmetricFunction] = None


@dataclass(frozen=True)
class InfiniteReport:
    """Result of the infinite-extendibility probe.

    ``UNKNOWN`` is honest: the grid, not the law, may be at fault, so a
    failed mixture search refutes nothing.  Probe range and grid depth are
    always recorded; ``grid_depth_used`` is the depth that certified (None
    when the certificate did not come from a grid search).
    """

    outcome: InfiniteOutcome
    N_max: int
    grid_depth: int
    mixture: Optional[tuple[Atom, ...]] = None
    failing_N: Optional[int] = None
    failing_report: Optional[ExtendReport] = None
    grid_depth_used: Optional[int] = None


class CovarianceBound(NamedTuple):
    cov: Fraction
    var: Fraction
    satisfies: bool


# -- shared pieces ---------------------------------------------------------------


def _check_target(P: ExchangeableLaw, N: int) -> None:
    if N < P.n:
        raise InputError(f"extend: need N >= n, got N={N} < n={P.n}")
    ensure_within_cap(type_count(P.alphabet.size, N), "mass-N type space")


def _bounded_compositions(caps: Sequence[int], mass: int):
    """Tuples ``0 <= m_i <= caps[i]`` with ``sum == mass`` (small widths)."""
    parts = len(caps)
    suffix = [0] * (parts + 1)
    for i in range(parts - 1, -1, -1):
        suffix[i] = suffix[i + 1] + caps[i]
    if mass > suffix[0]:
        return
    chosen = [0] * parts

    def rec(pos: int, remaining: int):
        if pos == parts:
            yield tuple(chosen)
            return
        lo = max(0, remaining - suffix[pos + 1])
        hi = min(caps[pos], remaining)
        for c in range(lo, hi + 1):
            chosen[pos] = c
            yield from rec(pos + 1, remaining - c)

    yield from rec(0, mass)


def _sparse_key(tv: TypeVector) -> tuple[tuple[int, int], ...]:
    return tuple((i, c) for i, c in enumerate(tv.counts) if c)


def marginal_matches(witness: ExchangeableLaw, P: ExchangeableLaw) -> bool:
    """Exact marginal identity: does ``witness`` project onto ``P``?

    Accumulates in support-local coordinates (witness types can live on a
    wide alphabet while touching only a few symbols each) and compares
    against every mass-``n`` weight of ``P``, zeros included.
    """
    if witness.alphabet != P.alphabet or witness.n < P.n:
        return False
    n = P.n
    denominator = math.comb(witness.n, n)
    acc: dict[tuple[tuple[int, int], ...], Fraction] = {}
    for nu, q in witness.weights.items():
        sup = [i for i, c in enumerate(nu.counts) if c]
        caps = [nu.counts[i] for i in sup]
        for local in _bounded_compositions(caps, n):
            ways = 1
            for cap, m in zip(caps, local):
                if m:
                    ways *= math.comb(cap, m)
            key = tuple((i, m) for i, m in zip(sup, local) if m)
            coeff = q * Fraction(ways, denominator)
            acc[key] = acc.get(key, Fraction(0)) + coeff
    for mu in enumerate_types(P.alphabet.size, n):
        if acc.get(_sparse_key(mu), Fraction(0)) != P.weight(mu):
            return False
    return True


def _urn_columns(P: ExchangeableLaw, N: int):
    """The marginal-identity constraint data: mass-N types and, per type,
    its sparse column of urn coefficients against mass-n types."""
    k, n = P.alphabet.size, P.n
    nus = enumerate_types(k, N)
    mus = enumerate_types(k, n)
    mu_index = {mu: i for i, mu in enumerate(mus)}
    columns: list[list[tuple[int, Fraction]]] = []
    for nu in nus:
        col = [(mu_index[mu], urn_coefficient(nu, mu)) for mu in subtypes(nu, n)]
        columns.append(col)
    return nus, mus, columns


def _feasibility_lp(P: ExchangeableLaw, N: int):
    nus, mus, columns = _urn_columns(P, N)
    nrows, nvars = len(mus), len(nus)
    rows = [[Fraction(0)] * nvars for _ in range(nrows)]
    for v, col in enumerate(columns):
        for r, coef in col:
            rows[r][v] = coef
    constraints = tuple(
        (tuple(rows[r]), "=", P.weight(mus[r])) for r in range(nrows)
    )
    lp = LinearProgram.build("min", [0] * nvars, constraints)
    return lp, nus, mus


# -- the norm --------------------------------------------------------------------


def norm_EN(P: ExchangeableLaw, N: int) -> Fraction:
    """Norm of the extending functional at target length ``N``.

    Equal to the optimum of: maximize ``E_P g`` over symmetric ``g`` with
    ``|U g| <= 1`` everywhere.  Computed from the dual side - the minimum
    total variation of a signed combination of urn measures reproducing
    ``P`` - which has only ``|N_n|`` rows and the identical exact value.
    Always >= 1, with equality iff ``P`` is N-extendible.
    """
    _check_target(P, N)
    nus, mus, columns = _urn_columns(P, N)
    nrows, natoms = len(mus), len(nus)
    # Variables: positive then negative parts of the urn coefficients.
    rows = [[Fraction(0)] * (2 * natoms) for _ in range(nrows)]
    for v, col in enumerate(columns):
        for r, coef in col:
            rows[r][v] = coef
            rows[r][natoms + v] = -coef
    constraints = tuple(
        (tuple(rows[r]), "=", P.weight(mus[r])) for r in range(nrows)
    )
    lp = LinearProgram.build("min", [1] * (2 * natoms), constraints)
    out = solve(lp)
    if out.status is not LpStatus.OPTIMAL:
        raise AssertionError("norm: total-variation program must be solvable")
    value = out.objective_value
    if value < 1:
        raise AssertionError("norm: computed value below 1")
    return value


# -- constructive fast paths -------------------------------------------------------


def _transport_witness(P: ExchangeableLaw, N: int) -> Optional[ExchangeableLaw]:
    """Push ``P`` through the triangular inversion tables.

    The result always satisfies the marginal identities but may be signed;
    it is a witness exactly when it lands in the nonnegative orthant.
    """
    t: dict[TypeVector, Fraction] = {}
    for mu, w in P.weights.items():
        for nu, c in invert_urn(mu, N).coeffs.items():
            t[nu] = t.get(nu, Fraction(0)) + w * c
    if any(v < 0 for v in t.values()):
        return None
    return ExchangeableLaw(P.alphabet, N, t)


def _pair_matrix(P: ExchangeableLaw) -> list[list[Fraction]]:
    """Point probabilities P(X1=a, X2=b) of a pair law, as a k x k table."""
    k = P.alphabet.size
    m = [[Fraction(0)] * k for _ in range(k)]
    for tau, w in P.weights.items():
        sup = tau.support()
        if len(sup) == 1:
            a = sup[0]
            m[a][a] = w
        else:
            a, b = sup
            m[a][b] = m[b][a] = w / 2
    return m


def staircase_mixture(P: ExchangeableLaw) -> Optional[tuple[Atom, ...]]:
    """Exact product-mixture certificate for "staircase" pair laws.

    Applies when ``P(X1=a, X2=b) == h(max(a, b))`` for a nonincreasing
    nonnegative profile ``h`` over the symbol positions.  Such a law is the
    mixture of uniform product laws on the prefixes, with telescoping
    weights ``(h(r) - h(r+1)) * r^2``; the peeling is exact and the weights
    are nonnegative precisely because ``h`` is nonincreasing.
    """
    if P.n != 2:
        return None
    k = P.alphabet.size
    m = _pair_matrix(P)
    profile = [m[r][r] for r in range(k)]
    for a in range(k):
        for b in range(k):
            if m[a][b] != profile[max(a, b)]:
                return None
    if any(profile[r] < profile[r + 1] for r in range(k - 1)) or profile[-1] < 0:
        return None
    atoms: list[Atom] = []
    for r in range(1, k + 1):
        nxt = profile[r] if r < k else Fraction(0)
        weight = (profile[r - 1] - nxt) * r * r
        if weight:
            theta = tuple(
                Fraction(1, r) if i < r else Fraction(0) for i in range(k)
            )
            atoms.append((weight, theta))
    if sum((w for w, _ in atoms), Fraction(0)) != 1:
        return None
    return tuple(atoms)


def _product_type_weights(theta: Sequence[Fraction], n: int) -> dict[TypeVector, Fraction]:
    """Multinomial type weights, enumerating over the support of theta only.

    Works over a common denominator so each weight costs integer power-table
    lookups plus a single Fraction construction.
    """
    k = len(theta)
    sup = [i for i, p in enumerate(theta) if p]
    common = math.lcm(*(theta[i].denominator for i in sup))
    scale = common**n
    powers = [[1] * (n + 1) for _ in sup]
    for row, pos in enumerate(sup):
        base = theta[pos].numerator * (common // theta[pos].denominator)
        for c in range(1, n + 1):
            powers[row][c] = powers[row][c - 1] * base
    out: dict[TypeVector, Fraction] = {}
    template = [0] * k
    for small in enumerate_types(len(sup), n):
        w = multiset_count(small)
        for row, c in enumerate(small.counts):
            if c:
                w *= powers[row][c]
                template[sup[row]] = c
        out[_make_type(tuple(template))] = Fraction(w, scale)
        for pos in sup:
            template[pos] = 0
    return out


def mixture_extension(
    atoms: Sequence[Atom], N: int, alphabet: Alphabet
) -> ExchangeableLaw:
    """The length-``N`` law of a nonnegative product mixture."""
    weights: dict[TypeVector, Fraction] = {}
    for w, theta in atoms:
        if w < 0:
            raise InputError("mixture_extension: weights must be nonnegative")
        for tv, pw in _product_type_weights(theta, N).items():
            weights[tv] = weights.get(tv, Fraction(0)) + w * pw
    return ExchangeableLaw(alphabet, N, weights)


# -- the decision ------------------------------------------------------------------


def _refutation_from_farkas(
    P: ExchangeableLaw, N: int, mus: Sequence[TypeVector], farkas: Sequence[Fraction]
) -> SymmetricFunction:
    """Turn a Farkas ray for the witness system into a normalized refutation.

    The ray gives ``g0`` with ``E_P g0 > 0`` while ``U g0 <= 0`` pointwise;
    recentering and rescaling makes ``sup |U g| = 1`` with ``E_P g > 1``,
    a hand-checkable violation of the norm bound.
    """
    g0 = SymmetricFunction.from_values(
        P.alphabet, P.n, {mu: -y for mu, y in zip(mus, farkas) if y}
    )
    image = apply_U(g0, N)
    hi = max(image.values.values())
    lo = min(image.values.values())
    # hi == lo would mean U g0 is constant, forcing g0 constant (the
    # symmetrization is injective on type functions) and E_P g0 <= 0.
    if hi == lo:
        raise AssertionError("refutation: Farkas image collapsed to a constant")
    shift = -(hi + lo) / 2
    scale = 2 / (hi - lo)
    g = g0.shift_scale(shift, scale)
    if sup_norm(apply_U(g, N)) != 1 or expectation(P, g) <= 1:
        raise AssertionError("refutation: normalization failed")
    return g


def _witness_by_lp(P: ExchangeableLaw, N: int):
    """Solve the witness feasibility program; returns (witness, None) or
    (None, refutation)."""
    lp, nus, mus = _feasibility_lp(P, N)
    out = solve(lp)
    if out.status is LpStatus.OPTIMAL:
        weights = {nu: q for nu, q in zip(nus, out.primal) if q}
        return ExchangeableLaw(P.alphabet, N, weights), None
    if out.status is LpStatus.INFEASIBLE:
        return None, _refutation_from_farkas(P, N, mus, out.certificate)
    raise AssertionError("witness search: feasibility program cannot be unbounded")


def check_extendible(P: ExchangeableLaw, N: int) -> ExtendReport:
    """Decide N-extendibility with a verified certificate either way.

    Extendible ⟺ norm == 1; the report asserts that equivalence.  With a
    witness in hand the norm is pinned to 1 without another solve: the
    witness is a total-variation-1 reproduction of ``P`` (so norm <= 1) and
    row stochasticity forces norm >= 1.
    """
    _check_target(P, N)
    witness = _transport_witness(P, N)
    if witness is None:
        atoms = staircase_mixture(P)
        if atoms is not None:
            witness = mixture_extension(atoms, N, P.alphabet)
    if witness is None:
        witness, refutation = _witness_by_lp(P, N)
        if witness is None:
            norm = norm_EN(P, N)
            if norm <= 1:
                raise AssertionError("extend: refuted law must have norm > 1")
            return ExtendReport(
                N, Verdict.NOT_EXTENDIBLE, norm, refutation=refutation
            )
    if not marginal_matches(witness, P):
        raise AssertionError("extend: witness failed the marginal identity")
    return ExtendReport(N, Verdict.EXTENDIBLE, Fraction(1), witness=witness)


def corollary_criterion(
    P: ExchangeableLaw, g: SymmetricFunction, N: int, epsilon: RationalLike
) -> bool:
    """Slack test ``|E_P g| <= (1 + eps) * sup |U g|`` for one function.

    Holds for every ``g`` and every positive ``eps`` iff ``P`` is
    N-extendible; a single failure certifies non-extendibility.
    """
    eps = as_fraction(epsilon)
    if eps <= 0:
        raise InputError("corollary_criterion: epsilon must be positive")
    if N < P.n:
        raise InputError(f"extend: need N >= n, got N={N} < n={P.n}")
    return abs(expectation(P, g)) <= (1 + eps) * sup_norm(apply_U(g, N))


def _grid_mixture(P: ExchangeableLaw, depth: int) -> Optional[tuple[Atom, ...]]:
    """Nonnegative mixture of grid product laws reproducing P, if any."""
    k, n = P.alphabet.size, P.n
    ensure_within_cap(type_count(k, depth), "simplex grid")
    thetas = simplex_grid(k, depth)
    mus = enumerate_types(k, n)
    rows = [[Fraction(0)] * len(thetas) for _ in mus]
    mu_index = {mu: r for r, mu in enumerate(mus)}
    for v, theta in enumerate(thetas):
        for tv, w in _product_type_weights(theta, n).items():
            if w:
                rows[mu_index[tv]][v] = w
    constraints = tuple(
        (tuple(rows[r]), "=", P.weight(mu)) for r, mu in enumerate(mus)
    )
    lp = LinearProgram.build("min", [0] * len(thetas), constraints)
    out = solve(lp)
    if out.status is not LpStatus.OPTIMAL:
        return None
    return tuple((lam, theta) for lam, theta in zip(out.primal, thetas) if lam)


def probe_infinite(
    P: ExchangeableLaw, N_max: int, grid_depth: int
) -> InfiniteReport:
    """Probe infinite extendibility within a finite budget.

    Step 1 sweeps N upward and reports the first refutation.  Step 2 tries
    to certify by a product-mixture: the staircase certificate first (exact,
    grid-free), then the grid LP at ``grid_depth`` and once more at double
    depth.  Grid infeasibility proves nothing, hence UNKNOWN.
    """
    if N_max < P.n:
        raise InputError(f"probe: need N_max >= n, got {N_max} < {P.n}")
    if grid_depth < 1:
        raise InputError("probe: grid_depth must be >= 1")
    for N in range(P.n + 1, N_max + 1):
        report = check_extendible(P, N)
        if report.verdict is Verdict.NOT_EXTENDIBLE:
            return InfiniteReport(
                InfiniteOutcome.REFUTED_AT,
                N_max=N_max,
                grid_depth=grid_depth,
                failing_N=N,
                failing_report=report,
            )
    atoms = staircase_mixture(P)
    if atoms is not None:
        return InfiniteReport(
            InfiniteOutcome.CERTIFIED_INFINITE,
            N_max=N_max,
            grid_depth=grid_depth,
            mixture=atoms,
        )
    for depth in (grid_depth, 2 * grid_depth):
        atoms = _grid_mixture(P, depth)
        if atoms is not None:
            return InfiniteReport(
                InfiniteOutcome.CERTIFIED_INFINITE,
                N_max=N_max,
                grid_depth=grid_depth,
                mixture=atoms,
                grid_depth_used=depth,
            )
    return InfiniteReport(
        InfiniteOutcome.UNKNOWN, N_max=N_max, grid_depth=grid_depth
    )


def covariance_bound(
    P: ExchangeableLaw, embedding: Mapping[str, RationalLike]
) -> CovarianceBound:
    """Pairwise covariance versus the exchangeability floor ``-var/(n-1)``.

    ``embedding`` assigns a rational value to every symbol; the moments come
    from the exact one- and two-coordinate marginals of ``P``.
    """
    if P.n < 2:
        raise InputError("covariance_bound: law must have n >= 2")
    values = []
    for s in P.alphabet.symbols:
        if s not in embedding:
            raise InputError(f"covariance_bound: embedding missing symbol {s!r}")
        values.append(as_fraction(embedding[s]))

    pair = marginalize(P, 2)
    single = marginalize(P, 1)
    k = P.alphabet.size

    mean = Fraction(0)
    second = Fraction(0)
    for i in range(k):
        w = single.weight(TypeVector.delta(i, k))
        if w:
            mean += w * values[i]
            second += w * values[i] ** 2

    cross = Fraction(0)
    for tau, w in pair.weights.items():
        sup = tau.support()
        if len(sup) == 1:
            cross += w * values[sup[0]] ** 2
        else:
            a, b = sup
            cross += w * values[a] * values[b]

    cov = cross - mean * mean
    var = second - mean * mean
    floor = -var / (P.n - 1)
    return CovarianceBound(cov=cov, var=var, satisfies=cov >= floor)


__all__ = [
    "CovarianceBound",
    "ExtendReport",
    "InfiniteOutcome",
    "InfiniteReport",
    "Verdict",
    "check_extendible",
    "corollary_criterion",
    "covariance_bound",
    "marginal_matches",
    "mixture_extension",
    "norm_EN",
    "probe_infinite",
    "staircase_mixture",
]
