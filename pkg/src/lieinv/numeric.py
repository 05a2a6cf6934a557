"""Randomized numerical oracles: zero testing, Jacobians, functional rank.

All checks evaluate candidate expressions at reproducibly sampled random
points.  Points are drawn from narrow ranges near the identity so that the
exponential-coordinate constructions stay well conditioned; symbols that
appear in any denominator are sampled bounded away from zero.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Optional, Sequence

from . import expr as ex
from .errors import SingularEvaluation, Unsampleable

DEFAULT_SEED = 0xC0FFEE
DEFAULT_POINTS = 32
DEFAULT_TOL = 1e-7
RANK_PIVOT_TOL = 1e-9
FD_STEP = 1e-6
MAX_SAMPLE_ATTEMPTS = 64


@dataclass(frozen=True)
class SamplerConfig:
    """Reproducible sampling policy for all numeric checks."""

    seed: int = DEFAULT_SEED
    points: int = DEFAULT_POINTS
    tol: float = DEFAULT_TOL
    base_range: float = 0.4
    jet_range: float = 1.0
    denom_low: float = 0.5
    denom_high: float = 1.5

    def with_seed(self, seed: Optional[int]) -> "SamplerConfig":
        return self if seed is None else replace(self, seed=seed)


def _draw(rng: random.Random, sym: ex.Symbol, denom: bool,
          cfg: SamplerConfig, params: Mapping) -> float:
    if sym.kind == ex.PARAM:
        v = params.get(sym.name)
        if v is None:
            raise Unsampleable(f"parameter {sym.name!r} has no assigned value")
        return float(v)
    if denom:
        mag = rng.uniform(cfg.denom_low, cfg.denom_high)
        return mag if rng.random() < 0.5 else -mag
    r = cfg.jet_range if sym.kind == ex.JET else cfg.base_range
    return rng.uniform(-r, r)


def sample_points(symbols: Iterable[ex.Symbol], cfg: SamplerConfig,
                  denom_syms: frozenset = frozenset(),
                  params: Optional[Mapping] = None) -> list:
    """Draw cfg.points assignments {name: float} for the given symbols.

    Symbols are ordered by name so the stream is independent of set/iteration
    order; denominator symbols are bounded away from zero.
    """
    params = params or {}
    symbols = sorted(set(symbols), key=lambda s: (s.name, s.kind))
    denom_names = {s.name for s in denom_syms}
    rng = random.Random(cfg.seed)
    out = []
    for _ in range(cfg.points):
        pt = {}
        for s in symbols:
            pt[s.name] = _draw(rng, s, s.name in denom_names, cfg, params)
        out.append(pt)
    return out


def _magnitude(e: ex.Expr, point: Mapping) -> float:
    """Cancellation-free magnitude of e at a point (abs at leaves, propagated)."""
    return ex.compile_numeric(e, magnitude=True)(dict(point))


def _eval_at(e: ex.Expr, point: Mapping) -> float:
    return ex.compile_numeric(e)(dict(point))


def is_zero(e: ex.Expr, cfg: SamplerConfig = SamplerConfig(),
            params: Optional[Mapping] = None,
            extra_denoms: frozenset = frozenset()) -> bool:
    """Randomized zero test: |e(p)| <= tol * max(1, magnitude(e, p)) at all points.

    The magnitude is the cancellation-free estimate of e itself, so genuine
    identities with large intermediate terms still pass, while expressions
    that are merely small never do.  Points where evaluation is singular are
    re-drawn; persistent singularity raises Unsampleable.
    """
    if isinstance(e, ex.Const):
        return e.value == 0
    syms = e.free_symbols()
    denoms = ex.denominator_symbols(e) | extra_denoms
    checked = 0
    attempt_cfg = cfg
    attempts = 0
    while checked < cfg.points:
        pts = sample_points(syms, replace(attempt_cfg, points=cfg.points - checked),
                            denoms, params)
        progressed = False
        for pt in pts:
            try:
                val = _eval_at(e, pt)
                scale = _magnitude(e, pt)
            except SingularEvaluation:
                continue
            if abs(val) > cfg.tol * max(1.0, scale):
                return False
            checked += 1
            progressed = True
        attempts += 1
        if attempts >= MAX_SAMPLE_ATTEMPTS:
            raise Unsampleable(
                f"could not draw {cfg.points} regular points after "
                f"{attempts} attempts for {ex.render(e)}"
            )
        if not progressed or checked < cfg.points:
            attempt_cfg = replace(attempt_cfg, seed=attempt_cfg.seed + 1)
    return True


def exprs_equal(a: ex.Expr, b: ex.Expr, cfg: SamplerConfig = SamplerConfig(),
                params: Optional[Mapping] = None) -> bool:
    """Numeric equality a == b via is_zero(a - b) with shared denominator info."""
    denoms = ex.denominator_symbols(a) | ex.denominator_symbols(b)
    return is_zero(a - b, cfg, params, extra_denoms=denoms)


def fd_gradient(e: ex.Expr, point: Mapping, order: Sequence[str],
                step: float = FD_STEP) -> list:
    """Central-difference gradient of e with respect to the named symbols."""
    fn = ex.compile_numeric(e)
    base = dict(point)
    out = []
    for name in order:
        hi = dict(base)
        lo = dict(base)
        hi[name] = base[name] + step
        lo[name] = base[name] - step
        out.append((fn(hi) - fn(lo)) / (2.0 * step))
    return out


def _row_echelon_rank(matrix: list, tol: float = RANK_PIVOT_TOL) -> int:
    """Rank by Gaussian elimination with full pivoting.

    The pivot threshold is relative to the largest pivot seen so far.
    """
    m = [row[:] for row in matrix]
    if not m or not m[0]:
        return 0
    rows, cols = len(m), len(m[0])
    rank = 0
    first_pivot = None
    r = 0
    used_cols = set()
    while r < rows:
        best = (0.0, -1, -1)
        for i in range(r, rows):
            for j in range(cols):
                if j in used_cols:
                    continue
                v = abs(m[i][j])
                if v > best[0]:
                    best = (v, i, j)
        pv, pi, pj = best
        if first_pivot is None:
            first_pivot = pv
        if pv <= tol * max(1.0, first_pivot if first_pivot else 1.0):
            break
        m[r], m[pi] = m[pi], m[r]
        used_cols.add(pj)
        for i in range(r + 1, rows):
            f = m[i][pj] / m[r][pj]
            if f != 0.0:
                for j in range(cols):
                    m[i][j] -= f * m[r][j]
        rank += 1
        r += 1
    return rank


def functional_rank(exprs: Sequence[ex.Expr], cfg: SamplerConfig = SamplerConfig(),
                    params: Optional[Mapping] = None,
                    variables: Optional[Sequence[ex.Symbol]] = None) -> int:
    """Generic rank of the Jacobian of the given functions.

    Differentiation is by central differences with respect to the union of
    free symbols (parameters excluded); the result is the maximum rank over
    the sampled points, which equals the generic rank with probability one.
    """
    exprs = list(exprs)
    if not exprs:
        return 0
    syms = set()
    denoms = frozenset()
    for e in exprs:
        syms |= {s for s in e.free_symbols() if s.kind != ex.PARAM}
        denoms |= ex.denominator_symbols(e)
    if variables is not None:
        var_order = [s.name for s in variables]
        syms |= set(variables)
    else:
        var_order = sorted(s.name for s in syms)
    param_syms = set()
    for e in exprs:
        param_syms |= {s for s in e.free_symbols() if s.kind == ex.PARAM}
    pts = sample_points(syms | param_syms, replace(cfg, points=cfg.points),
                        denoms, params)
    best = 0
    evaluated = 0
    for pt in pts:
        try:
            jac = [fd_gradient(e, pt, var_order) for e in exprs]
        except SingularEvaluation:
            continue
        evaluated += 1
        best = max(best, _row_echelon_rank(jac))
        if best == min(len(exprs), len(var_order)):
            break
    if evaluated == 0:
        raise Unsampleable("all sampled points were singular for the Jacobian")
    return best


def equivalence_check(a: Sequence[ex.Expr], b: Sequence[ex.Expr],
                      cfg: SamplerConfig = SamplerConfig(),
                      params: Optional[Mapping] = None) -> bool:
    """Functional equivalence of two invariant sets.

    True iff rank(A) == rank(B) == rank(A ∪ B), i.e. each family is
    functionally expressible through the other.
    """
    ra = functional_rank(a, cfg, params)
    rb = functional_rank(b, cfg, params)
    rab = functional_rank(list(a) + list(b), cfg, params)
    return ra == rb == rab
