"""Second-order jet spaces, total derivatives, prolongation, frame operators.

A JetSpace fixes the independent coordinates and the name of the dependent
variable; it owns the base and jet symbols and resolves identifiers for the
parser.  On top of it live:

  * total_derivative  -- D_a = d/dx^a + u_a d/du + u_ab d/du_b
  * VectorField       -- first-order derivation on the base coordinates
  * frame_derivative  -- the lifted operator  X^a D_a  of a vector field
  * symmetrized_frame_second -- (1/2)(X Y + Y X) applied through frames
  * prolong2          -- second prolongation of a point symmetry generator
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Sequence

from . import expr as ex
from .errors import OrderOverflow, UnsupportedOperation


class JetSpace:
    """Coordinates, dependent variable, and the induced order-2 jet symbols."""

    def __init__(self, coords: Sequence[str], dep: str,
                 params: Iterable[str] = ()):
        coords = tuple(coords)
        if len(set(coords)) != len(coords):
            raise ValueError(f"duplicate coordinates in {coords}")
        if dep in coords:
            raise ValueError(f"dependent name {dep!r} collides with a coordinate")
        self.coords = coords
        self.dep = dep
        self.params = tuple(sorted(set(params)))
        self._base = {c: ex.Symbol(c, ex.BASE) for c in coords}
        self._params = {p: ex.Symbol(p, ex.PARAM) for p in self.params}

    # -- symbols -------------------------------------------------------------
    def base(self, name: str) -> ex.Symbol:
        return self._base[name]

    def param(self, name: str) -> ex.Symbol:
        return self._params[name]

    def jet(self, *index: str) -> ex.Symbol:
        for c in index:
            if c not in self._base:
                raise KeyError(f"{c!r} is not a coordinate of this space")
        return ex.jet_symbol(self.dep, index)

    def base_exprs(self) -> Dict[str, ex.Expr]:
        return {c: ex.Sym(s) for c, s in self._base.items()}

    def jet_symbols(self, max_order: int = 2):
        """All jet symbols up to the given order, in a fixed order."""
        out = [self.jet()]
        if max_order >= 1:
            out += [self.jet(a) for a in self.coords]
        if max_order >= 2:
            n = len(self.coords)
            out += [self.jet(self.coords[i], self.coords[j])
                    for i in range(n) for j in range(i, n)]
        return out

    # -- identifier resolution (parser context) -------------------------------
    def resolve(self, name: str) -> ex.Symbol:
        if name in self._base:
            return self._base[name]
        if name in self._params:
            return self._params[name]
        if name == self.dep:
            return self.jet()
        prefix = self.dep + "_"
        if name.startswith(prefix):
            index = self._parse_index(name[len(prefix):])
            if index is not None and 1 <= len(index) <= 2:
                return self.jet(*index)
        raise KeyError(name)

    def _parse_index(self, suffix: str):
        """Split a jet-index suffix into coordinate names, longest match first."""
        by_len = sorted(self._base, key=len, reverse=True)
        out = []
        while suffix:
            for c in by_len:
                if suffix.startswith(c):
                    out.append(c)
                    suffix = suffix[len(c):]
                    break
            else:
                return None
        return out

    def parse(self, text: str) -> ex.Expr:
        return ex.parse(text, self)


def total_derivative(e: ex.Expr, coord: str, space: JetSpace) -> ex.Expr:
    """Total derivative D_coord of an expression of order at most 1.

    Raises OrderOverflow if e depends on a second-order jet variable whose
    derivative would leave the order-2 jet space.
    """
    a = space.base(coord)
    parts = [ex.diff(e, a)]
    for sym in e.free_symbols():
        if sym.kind != ex.JET or sym.dep != space.dep:
            continue
        if sym.order >= 2:
            if ex.diff(e, sym) != ex.ZERO:
                raise OrderOverflow(
                    f"total derivative of {sym.name} leaves the order-2 jet space"
                )
            continue
        lifted = space.jet(*(sym.index + (coord,)))
        parts.append(ex.mul(ex.diff(e, sym), ex.Sym(lifted)))
    return ex.add(*parts)


@dataclass(frozen=True)
class VectorField:
    """A vector field on the base coordinates of a jet space.

    `components` maps coordinate name -> coefficient expression; missing
    coordinates mean a zero component.
    """

    space: JetSpace
    components: tuple  # tuple of (coord, Expr) in space.coords order

    @staticmethod
    def from_dict(space: JetSpace, comps: Mapping[str, ex.Expr]) -> "VectorField":
        def conv(v):
            return space.parse(v) if isinstance(v, str) else ex.as_expr(v)

        items = tuple((c, conv(comps.get(c, ex.ZERO))) for c in space.coords)
        return VectorField(space, items)

    def component(self, coord: str) -> ex.Expr:
        for c, e in self.components:
            if c == coord:
                return e
        raise KeyError(coord)

    def apply(self, e: ex.Expr) -> ex.Expr:
        """First-order derivation: sum of component * d/dcoord."""
        return ex.add(*[ex.mul(comp, ex.diff(e, self.space.base(c)))
                        for c, comp in self.components])

    def bracket(self, other: "VectorField") -> "VectorField":
        comps = {}
        for c, _ in self.components:
            comps[c] = ex.add(
                self.apply(other.component(c)),
                ex.mul(ex.Const(-1), other.apply(self.component(c))),
            )
        return VectorField.from_dict(self.space, comps)

    def frame_derivative(self, e: ex.Expr) -> ex.Expr:
        """The lifted operator X^a D_a applied to a jet expression."""
        return ex.add(*[ex.mul(comp, total_derivative(e, c, self.space))
                        for c, comp in self.components])

    def __repr__(self):
        body = " + ".join(f"({ex.render(comp)}) d_{c}"
                          for c, comp in self.components
                          if comp != ex.ZERO) or "0"
        return f"<VectorField {body}>"


def frame_first(field: VectorField) -> ex.Expr:
    """First frame derivative of the dependent variable: X^a u_a."""
    u = ex.Sym(field.space.jet())
    return field.frame_derivative(u)


def symmetrized_frame_second(fi: VectorField, fj: VectorField) -> ex.Expr:
    """Symmetrized second frame derivative (1/2)(X_i X_j + X_j X_i) u."""
    u = ex.Sym(fi.space.jet())
    a = fi.frame_derivative(fj.frame_derivative(u))
    b = fj.frame_derivative(fi.frame_derivative(u))
    return ex.mul(ex.Const(Fraction(1, 2)), ex.add(a, b))


class ProlongedField:
    """Second prolongation of a point symmetry X = xi^a d_a + theta d_u."""

    def __init__(self, space: JetSpace, xi: Mapping[str, ex.Expr],
                 theta: ex.Expr = ex.ZERO):
        self.space = space
        self.xi = {c: ex.as_expr(xi.get(c, ex.ZERO)) for c in space.coords}
        self.theta = ex.as_expr(theta)
        self.phi1 = {}
        self.phi2 = {}
        # phi_a = D_a theta - u_b D_a xi^b
        for a in space.coords:
            terms = [total_derivative(self.theta, a, space)]
            for b in space.coords:
                terms.append(ex.mul(ex.Const(-1), ex.Sym(space.jet(b)),
                                    total_derivative(self.xi[b], a, space)))
            self.phi1[a] = ex.add(*terms)
        # phi_ab = D_b phi_a - u_ac D_b xi^c
        for i, a in enumerate(space.coords):
            for b in space.coords[i:]:
                terms = [total_derivative(self.phi1[a], b, space)]
                for c in space.coords:
                    terms.append(ex.mul(ex.Const(-1), ex.Sym(space.jet(a, c)),
                                        total_derivative(self.xi[c], b, space)))
                self.phi2[(a, b)] = ex.add(*terms)

    def apply(self, e: ex.Expr) -> ex.Expr:
        """Apply the prolonged derivation to a second-order jet expression."""
        space = self.space
        parts = [ex.mul(self.theta, ex.diff(e, space.jet()))]
        for a in space.coords:
            parts.append(ex.mul(self.xi[a], ex.diff(e, space.base(a))))
            parts.append(ex.mul(self.phi1[a], ex.diff(e, space.jet(a))))
        for (a, b), phi in self.phi2.items():
            parts.append(ex.mul(phi, ex.diff(e, space.jet(a, b))))
        return ex.add(*parts)


def prolong2(field: VectorField, theta: ex.Expr = ex.ZERO) -> ProlongedField:
    return ProlongedField(field.space, dict(field.components), theta)
