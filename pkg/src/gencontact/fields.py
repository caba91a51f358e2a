"""Fields on charts: jet-valued closures plus exterior/Courant calculus.

Every field evaluates at a chart point to a :class:`~gencontact.jets.JetArray`
holding the component values and their exact first and second derivatives.
Operations that consume a derivative order (exterior derivative, Lie
derivative, Courant bracket) return fields of correspondingly lower jet
order; nesting deeper than the order-2 budget raises ``JetOrderError``.

Form components are stored as full antisymmetric arrays.  The wedge and the
exterior derivative use the determinant convention,

    (a ^ b)(X, Y) = a(X) b(Y) - a(Y) b(X),
    d(omega)(X, Y) = X omega(Y) - Y omega(X) - omega([X, Y]),

so d(dz - y dx) has component value 1 on the (x, y) slot.
"""

from __future__ import annotations

import threading
from typing import Callable, List, Optional, Sequence

import numpy as np

from . import jets as J
from .charts import Chart
from .gta import GtEndo, GtVec
from .jets import JetArray

_MEMO_LIMIT = 512


class Field:
    """A chart plus a pure point -> JetArray closure, memoised per point."""

    def __init__(self, chart: Chart, fn: Callable[[np.ndarray], JetArray]):
        self.chart = chart
        self._fn = fn
        self._memo: dict = {}
        self._lock = threading.Lock()

    def at(self, point) -> JetArray:
        p = np.asarray(point, dtype=float)
        key = p.tobytes()
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        jet = self._fn(p)
        with self._lock:
            if len(self._memo) >= _MEMO_LIMIT:
                self._memo.clear()
            self._memo[key] = jet
        return jet

    def values(self, point) -> np.ndarray:
        return self.at(point).value

    # -- shared combinators --------------------------------------------------

    def _wrap(self, fn) -> "Field":
        return type(self)(self.chart, fn)

    def __add__(self, other):
        _same_chart(self, other)
        return self._wrap(lambda p: self.at(p) + other.at(p))

    def __sub__(self, other):
        _same_chart(self, other)
        return self._wrap(lambda p: self.at(p) - other.at(p))

    def __neg__(self):
        return self._wrap(lambda p: -self.at(p))

    def __mul__(self, c):
        if isinstance(c, ScalarField):
            _same_chart(self, c)
            return self._wrap(lambda p: J.jet_einsum(_scale_sub(self), c.at(p), self.at(p)))
        return self._wrap(lambda p: self.at(p) * c)

    __rmul__ = __mul__

    def conj(self):
        return self._wrap(lambda p: self.at(p).conj())


def _scale_sub(field: Field) -> str:
    rank = {ScalarField: 0, VectorField: 1, OneFormField: 1, SectionField: 1,
            MatrixField: 2, TwoFormField: 2, GtEndoField: 2, ThreeFormField: 3}[type(field)]
    idx = "abc"[:rank]
    return f",{idx}->{idx}"


def _same_chart(a: Field, b: Field):
    if a.chart is not b.chart and a.chart != b.chart:
        raise ValueError("fields live on different charts")


class ScalarField(Field):
    def __mul__(self, c):
        if isinstance(c, Field) and not isinstance(c, ScalarField):
            return c.__mul__(self)
        if isinstance(c, ScalarField):
            _same_chart(self, c)
            return ScalarField(self.chart, lambda p: self.at(p) * c.at(p))
        return ScalarField(self.chart, lambda p: self.at(p) * c)

    __rmul__ = __mul__

    def __truediv__(self, c):
        if isinstance(c, ScalarField):
            _same_chart(self, c)
            return ScalarField(self.chart, lambda p: self.at(p) / c.at(p))
        return ScalarField(self.chart, lambda p: self.at(p) / c)


class VectorField(Field):
    pass


class OneFormField(Field):
    pass


class TwoFormField(Field):
    pass


class ThreeFormField(Field):
    pass


class MatrixField(Field):
    """An (n, n) matrix of scalars: TM endomorphisms, metrics, form-maps."""

    def __matmul__(self, other: "MatrixField") -> "MatrixField":
        _same_chart(self, other)
        return MatrixField(self.chart, lambda p: J.jet_einsum("ij,jk->ik", self.at(p), other.at(p)))

    def apply(self, x: VectorField) -> VectorField:
        _same_chart(self, x)
        return VectorField(self.chart, lambda p: J.jet_einsum("ij,j->i", self.at(p), x.at(p)))

    def inv(self) -> "MatrixField":
        return MatrixField(self.chart, lambda p: J.jet_inv(self.at(p)))

    def transpose(self) -> "MatrixField":
        return MatrixField(self.chart, lambda p: _jT(self.at(p)))


class SectionField(Field):
    """Section of (TM + T*M) x C: 2n components, vector part first."""

    def gtvec(self, point) -> GtVec:
        n = self.chart.dim
        return GtVec(n, self.at(point).value)

    def vec_part(self) -> VectorField:
        n = self.chart.dim
        return VectorField(self.chart, lambda p: self.at(p)[:n])

    def form_part(self) -> OneFormField:
        n = self.chart.dim
        return OneFormField(self.chart, lambda p: self.at(p)[n:])


class GtEndoField(Field):
    """Field of endomorphisms of (TM + T*M) x C, one 2n x 2n matrix of scalars."""

    def gtendo(self, point) -> GtEndo:
        n = self.chart.dim
        return GtEndo(n, self.at(point).value)

    def apply(self, s: SectionField) -> SectionField:
        _same_chart(self, s)
        return SectionField(self.chart, lambda p: J.jet_einsum("ij,j->i", self.at(p), s.at(p)))

    def __matmul__(self, other: "GtEndoField") -> "GtEndoField":
        _same_chart(self, other)
        return GtEndoField(self.chart, lambda p: J.jet_einsum("ij,jk->ik", self.at(p), other.at(p)))

    def adjoint(self) -> "GtEndoField":
        n = self.chart.dim
        return GtEndoField(self.chart, lambda p: _swap_rows(_swap_rows(_jT(self.at(p)), n, 0), n, 1))


# -- constructors -------------------------------------------------------------


def coordinate(chart: Chart, i: int) -> ScalarField:
    n = chart.dim

    def fn(p):
        return J.seed_point(p, n)[i]

    return ScalarField(chart, fn)


def coordinate_by_name(chart: Chart, name: str) -> ScalarField:
    return coordinate(chart, chart.index_of(name))


def constant(chart: Chart, c) -> ScalarField:
    n = chart.dim
    return ScalarField(chart, lambda p: J.lift(complex(c), n))


def from_components(cls, chart: Chart, comps: Sequence) -> Field:
    """Stack scalar fields (arbitrarily nested lists) into a component field."""
    arr = np.asarray(comps, dtype=object)
    flat = list(arr.ravel())

    def fn(p):
        stacked = J.stack([f.at(p) for f in flat])
        return stacked.reshape(*arr.shape)

    return cls(chart, fn)


def vector_field(chart: Chart, comps) -> VectorField:
    return from_components(VectorField, chart, comps)


def one_form(chart: Chart, comps) -> OneFormField:
    return from_components(OneFormField, chart, comps)


def matrix_field(chart: Chart, comps) -> MatrixField:
    return from_components(MatrixField, chart, comps)


def basis_vector(chart: Chart, i: int) -> VectorField:
    n = chart.dim
    e = np.zeros(n)
    e[i] = 1.0
    return VectorField(chart, lambda p: J.lift(e, n))


def basis_form(chart: Chart, i: int) -> OneFormField:
    n = chart.dim
    e = np.zeros(n)
    e[i] = 1.0
    return OneFormField(chart, lambda p: J.lift(e, n))


def zero_two_form(chart: Chart) -> TwoFormField:
    n = chart.dim
    return TwoFormField(chart, lambda p: J.lift(np.zeros((n, n)), n))


def section(vec: Optional[VectorField] = None, form: Optional[OneFormField] = None) -> SectionField:
    some = vec if vec is not None else form
    if some is None:
        raise ValueError("need a vector part or a form part")
    chart = some.chart
    n = chart.dim
    zero = J.lift(np.zeros(n), n)

    def fn(p):
        jv = vec.at(p) if vec is not None else zero
        jf = form.at(p) if form is not None else zero
        return jconcat([jv, jf])

    return SectionField(chart, fn)


def coordinate_sections(chart: Chart) -> List[SectionField]:
    """The 2n constant sections: basis vectors then basis forms."""
    n = chart.dim
    out = [section(vec=basis_vector(chart, i)) for i in range(n)]
    out += [section(form=basis_form(chart, i)) for i in range(n)]
    return out


def endo_from_blocks(tt: MatrixField, tc: MatrixField, ct: MatrixField, cc: MatrixField) -> GtEndoField:
    chart = tt.chart

    def fn(p):
        top = jconcat([tt.at(p), tc.at(p)], axis=1)
        bot = jconcat([ct.at(p), cc.at(p)], axis=1)
        return jconcat([top, bot], axis=0)

    return GtEndoField(chart, fn)


def identity_endo(chart: Chart) -> GtEndoField:
    n = chart.dim
    return GtEndoField(chart, lambda p: J.lift(np.eye(2 * n), n))


def zero_endo(chart: Chart) -> GtEndoField:
    n = chart.dim
    return GtEndoField(chart, lambda p: J.lift(np.zeros((2 * n, 2 * n)), n))


def tensor_pair_field(e: SectionField, f: SectionField) -> GtEndoField:
    """Field version of the rank-one map A -> 2<F, A> E."""
    _same_chart(e, f)
    n = e.chart.dim
    return GtEndoField(e.chart, lambda p: J.jet_einsum("i,j->ij", e.at(p), _swap_half(f.at(p), n)))


def b_endo(b: TwoFormField) -> GtEndoField:
    """e^B as an endomorphism field: X+a -> X + a + i_X B."""
    chart = b.chart
    n = chart.dim
    eye = np.eye(n)
    zero = np.zeros((n, n))

    def fn(p):
        jb = b.at(p)
        top = jconcat([J.lift(eye, n), J.lift(zero, n)], axis=1)
        bot = jconcat([_jT(jb), J.lift(eye, n)], axis=1)
        return jconcat([top, bot], axis=0)

    return GtEndoField(chart, fn)


# -- jet-level utilities ------------------------------------------------------


def jconcat(parts: Sequence[JetArray], axis: int = 0) -> JetArray:
    nvars = parts[0].nvars
    value = np.concatenate([j.value for j in parts], axis=axis)
    grad = None
    hess = None
    if all(j.grad is not None for j in parts):
        grad = np.concatenate([j.grad for j in parts], axis=axis)
        if all(j.hess is not None for j in parts):
            hess = np.concatenate([j.hess for j in parts], axis=axis)
    return JetArray(value, grad, hess, nvars)


def _jmove(j: JetArray, src: int, dst: int) -> JetArray:
    g = None if j.grad is None else np.moveaxis(j.grad, src, dst)
    h = None if j.hess is None else np.moveaxis(j.hess, src, dst)
    return JetArray(np.moveaxis(j.value, src, dst), g, h, j.nvars)


def _jT(j: JetArray) -> JetArray:
    """Transpose the two leading (component) axes of a matrix jet."""
    return _jmove(j, 0, 1)


def _swap_half(j: JetArray, n: int) -> JetArray:
    """Swap vector and form halves of a section jet (the pairing swap)."""
    return jconcat([j[n:], j[:n]])


def _swap_rows(j: JetArray, n: int, axis: int) -> JetArray:
    lo = (slice(None),) * axis + (slice(0, n),)
    hi = (slice(None),) * axis + (slice(n, 2 * n),)
    return jconcat([j[hi], j[lo]], axis=axis)


def pair_jets(a: JetArray, b: JetArray, n: int) -> JetArray:
    return 0.5 * J.jet_einsum("i,i->", _swap_half(a, n), b)


def pair_minus_jets(a: JetArray, b: JetArray, n: int) -> JetArray:
    return 0.5 * (J.jet_einsum("i,i->", a[n:], b[:n]) - J.jet_einsum("i,i->", b[n:], a[:n]))


def pair_field(a: SectionField, b: SectionField) -> ScalarField:
    _same_chart(a, b)
    n = a.chart.dim
    return ScalarField(a.chart, lambda p: pair_jets(a.at(p), b.at(p), n))


def pair_minus_field(a: SectionField, b: SectionField) -> ScalarField:
    _same_chart(a, b)
    n = a.chart.dim
    return ScalarField(a.chart, lambda p: pair_minus_jets(a.at(p), b.at(p), n))


# -- exterior calculus --------------------------------------------------------

_FORM_RANK = {ScalarField: 0, OneFormField: 1, TwoFormField: 2, ThreeFormField: 3}
_FORM_BY_RANK = {0: ScalarField, 1: OneFormField, 2: TwoFormField, 3: ThreeFormField}


def d_jet(j: JetArray, k: int) -> JetArray:
    a = J.dshift(j)  # derivative axis appended to the leading shape
    out = _jmove(a, k, 0)
    for m in range(1, k + 1):
        out = out + (-1) ** m * _jmove(a, k, m)
    return out


def d(omega: Field) -> Field:
    k = _FORM_RANK.get(type(omega))
    if k is None or k > 2:
        raise ValueError("d supports scalar, 1-form and 2-form fields only")
    cls = _FORM_BY_RANK[k + 1]
    return cls(omega.chart, lambda p: d_jet(omega.at(p), k))


def interior_jet(xj: JetArray, oj: JetArray, k: int) -> JetArray:
    subs = {1: "i,i->", 2: "i,ij->j", 3: "i,ijk->jk"}[k]
    return J.jet_einsum(subs, xj, oj)


def interior(x: VectorField, omega: Field) -> Field:
    k = _FORM_RANK.get(type(omega))
    if not k:
        raise ValueError("interior product needs a form of degree >= 1")
    _same_chart(x, omega)
    cls = _FORM_BY_RANK[k - 1]
    return cls(omega.chart, lambda p: interior_jet(x.at(p), omega.at(p), k))


def wedge11(a: OneFormField, b: OneFormField) -> TwoFormField:
    _same_chart(a, b)

    def fn(p):
        ja, jb = a.at(p), b.at(p)
        m = J.jet_einsum("i,j->ij", ja, jb)
        return m - _jT(m)

    return TwoFormField(a.chart, fn)


def wedge12(a: OneFormField, w: TwoFormField) -> ThreeFormField:
    """(a ^ w)(X,Y,Z) = a(X) w(Y,Z) - a(Y) w(X,Z) + a(Z) w(X,Y)."""
    _same_chart(a, w)

    def fn(p):
        m = J.jet_einsum("i,jk->ijk", a.at(p), w.at(p))
        return m - _jmove(m, 0, 1) + _jmove(m, 0, 2)

    return ThreeFormField(a.chart, fn)


def lie_bracket(x: VectorField, y: VectorField) -> VectorField:
    _same_chart(x, y)

    def fn(p):
        jx, jy = x.at(p), y.at(p)
        return J.jet_einsum("j,ij->i", jx, J.dshift(jy)) - J.jet_einsum(
            "j,ij->i", jy, J.dshift(jx)
        )

    return VectorField(x.chart, fn)


def lie_derivative(x: VectorField, omega: Field) -> Field:
    """Cartan formula i_X d(omega) + d(i_X omega)."""
    k = _FORM_RANK.get(type(omega))
    if k is None or k > 2:
        raise ValueError("lie_derivative supports form degree <= 2")
    _same_chart(x, omega)
    cls = _FORM_BY_RANK[k]

    def fn(p):
        term1 = interior_jet(x.at(p), d_jet(omega.at(p), k), k + 1)
        if k == 0:
            return term1
        term2 = d_jet(interior_jet(x.at(p), omega.at(p), k), k - 1)
        return term1 + term2

    return cls(omega.chart, fn)


def c_transform(omega: Field, phi: MatrixField) -> Field:
    """Pull every slot of a k-form through a TM endomorphism field."""
    k = _FORM_RANK.get(type(omega))
    if k not in (1, 2, 3):
        raise ValueError("c_transform supports form degree 1..3")
    _same_chart(omega, phi)
    cls = type(omega)

    def fn(p):
        out = omega.at(p)
        jp = phi.at(p)
        for slot in range(k):
            out = _jmove(J.jet_einsum("a...,ai->...i", _jmove(out, slot, 0), jp), k - 1, slot)
        return out

    return cls(omega.chart, fn)


# -- Courant bracket and integrability operators ------------------------------


def courant_jets(ja: JetArray, jb: JetArray, n: int) -> JetArray:
    """[[X+a, Y+b]] = [X,Y] + L_X b - L_Y a - d(i_X b - i_Y a)/2, on jets."""
    x, a = ja[:n], ja[n:]
    y, b = jb[:n], jb[n:]
    dx, da = J.dshift(x), J.dshift(a)
    dy, db = J.dshift(y), J.dshift(b)
    vec = J.jet_einsum("j,ij->i", x, dy) - J.jet_einsum("j,ij->i", y, dx)
    # L_X b = X^i d_i b_j + b_i d_j X^i
    lxb = J.jet_einsum("i,ji->j", x, db) + J.jet_einsum("i,ij->j", b, dx)
    lya = J.jet_einsum("i,ji->j", y, da) + J.jet_einsum("i,ij->j", a, dy)
    # d(i_X b - i_Y a)_j = d_j(X^i b_i - Y^i a_i)
    exact = (
        J.jet_einsum("i,ij->j", b, dx)
        + J.jet_einsum("i,ij->j", x, db)
        - J.jet_einsum("i,ij->j", a, dy)
        - J.jet_einsum("i,ij->j", y, da)
    )
    form = lxb - lya - 0.5 * exact
    return jconcat([vec, form])


def courant(a: SectionField, b: SectionField) -> SectionField:
    _same_chart(a, b)
    n = a.chart.dim
    return SectionField(a.chart, lambda p: courant_jets(a.at(p), b.at(p), n))


def nij_jets(ja: JetArray, jb: JetArray, jc: JetArray, n: int) -> JetArray:
    s = pair_jets(courant_jets(ja, jb, n), jc, n)
    s = s + pair_jets(courant_jets(jb, jc, n), ja, n)
    s = s + pair_jets(courant_jets(jc, ja, n), jb, n)
    return (1.0 / 3.0) * s


def nij(a: SectionField, b: SectionField, c: SectionField) -> ScalarField:
    _same_chart(a, b)
    _same_chart(a, c)
    n = a.chart.dim
    return ScalarField(a.chart, lambda p: nij_jets(a.at(p), b.at(p), c.at(p), n))


def jac(a: SectionField, b: SectionField, c: SectionField) -> SectionField:
    """Courant Jacobiator: one derivative order consumed per bracket level."""
    _same_chart(a, b)
    _same_chart(a, c)
    n = a.chart.dim

    def fn(p):
        jab, jbc, jca = (
            courant_jets(a.at(p), b.at(p), n),
            courant_jets(b.at(p), c.at(p), n),
            courant_jets(c.at(p), a.at(p), n),
        )
        return (
            courant_jets(jab, c.at(p), n)
            + courant_jets(jbc, a.at(p), n)
            + courant_jets(jca, b.at(p), n)
        )

    return SectionField(a.chart, fn)


def b_transform_section(b: TwoFormField, s: SectionField) -> SectionField:
    return b_endo(b).apply(s)


# -- finite-difference validation ---------------------------------------------


def jet_validate(field: Field, point, step: float = 1e-5) -> float:
    """Max relative error of the field's jet against central differences.

    Second derivatives use a coarser step (eps**0.25) so the difference
    quotient is not dominated by rounding.
    """
    p = np.asarray(point, dtype=float)
    n = field.chart.dim
    jet = field.at(p)
    if jet.grad is None:
        raise ValueError("field carries no derivative data to validate")

    def val(q):
        return field.at(q).value

    scale = max(1.0, float(np.abs(jet.value).max()) if jet.value.size else 1.0)
    worst = 0.0
    for i in range(n):
        ei = np.zeros(n)
        ei[i] = step
        fd = (val(p + ei) - val(p - ei)) / (2 * step)
        err = np.abs(fd - jet.grad[..., i]).max() / scale
        worst = max(worst, float(err))
    if jet.hess is not None:
        h = max(step, float(np.finfo(float).eps) ** 0.25)
        f0 = val(p)
        for i in range(n):
            ei = np.zeros(n)
            ei[i] = h
            fd = (val(p + ei) - 2 * f0 + val(p - ei)) / h**2
            worst = max(worst, float(np.abs(fd - jet.hess[..., i, i]).max() / scale))
            for j in range(i + 1, n):
                ej = np.zeros(n)
                ej[j] = h
                fd = (
                    val(p + ei + ej) - val(p + ei - ej) - val(p - ei + ej) + val(p - ei - ej)
                ) / (4 * h**2)
                worst = max(worst, float(np.abs(fd - jet.hess[..., i, j]).max() / scale))
    return worst
