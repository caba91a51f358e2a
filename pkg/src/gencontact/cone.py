"""The cone C(M) = M x R in t-coordinates (r = e^t): lifts, Psi maps, R-conjugation.

All cone computation uses the coordinate t with r = e^t, so the radial
2-forms of the deformation theory are smooth exponentials and the chart
stays a box.  The orientation of Psi follows the displayed block matrix
(top-left eta_- (x) d/dt - dt (x) xi_+), under which E+ - i d/dt and
E- - i dt span the +i directions added on the cone; so Psi(d/dt) = -E+.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Union

import numpy as np

from . import fields as F
from . import jets as J
from .charts import Chart, ConeChart
from .fields import GtEndoField, ScalarField, SectionField
from .report import ResidualReport, map_points
from .structures import FGacs, Gacs

T_INDEPENDENCE_TOL = 1e-10


@dataclass(frozen=True)
class ConeGacx:
    """Generalized almost complex structure on a cone chart."""

    chart: ConeChart
    J: GtEndoField


# -- lifting -------------------------------------------------------------------


def lift_scalar(cone: ConeChart, f: ScalarField) -> ScalarField:
    n = cone.base.dim
    return ScalarField(cone, lambda p: J.extend_vars(f.at(p[:n]), cone.dim))


def lift_form(cone: ConeChart, omega) -> "F.OneFormField":
    n = cone.base.dim

    def fn(p):
        j = J.extend_vars(omega.at(p[:n]), cone.dim)
        return F.jconcat([j, J.lift(np.zeros(1), cone.dim)])

    return F.OneFormField(cone, fn)


def cone_points(base_points, ts=(-0.5, 0.0, 0.5)) -> List[np.ndarray]:
    return [np.concatenate([p, [t]]) for p in base_points for t in ts]


def lift_section(cone: ConeChart, s: SectionField) -> SectionField:
    n = cone.base.dim

    def fn(p):
        j = J.extend_vars(s.at(p[:n]), cone.dim)
        zero = J.lift(np.zeros(1), cone.dim)
        return F.jconcat([j[:n], zero, j[n:], zero])

    return SectionField(cone, fn)


def lift_endo(cone: ConeChart, e: GtEndoField) -> GtEndoField:
    n = cone.base.dim
    N = cone.dim
    rows = _m_indices(n)

    def fn(p):
        j = J.extend_vars(e.at(p[:n]), N)
        out_v = np.zeros((2 * N, 2 * N), dtype=complex)
        out_g = np.zeros((2 * N, 2 * N, N), dtype=complex) if j.grad is not None else None
        out_h = (
            np.zeros((2 * N, 2 * N, N, N), dtype=complex) if j.hess is not None else None
        )
        ix = np.ix_(rows, rows)
        out_v[ix] = j.value
        if out_g is not None:
            out_g[ix] = j.grad
        if out_h is not None:
            out_h[ix] = j.hess
        return J.JetArray(out_v, out_g, out_h, N)

    return GtEndoField(cone, fn)


def _m_indices(n: int) -> List[int]:
    """Positions of the base-chart slots inside a cone section stack."""
    return list(range(n)) + list(range(n + 1, 2 * n + 1))


def restrict_section(base: Chart, s: SectionField, t0: float = 0.0) -> SectionField:
    """Evaluate a t-independent cone section as a base-chart section."""
    n = base.dim
    rows = _m_indices(n)

    def fn(p):
        j = s.at(np.concatenate([p, [t0]]))
        return J.restrict_vars(j[rows], n)

    return SectionField(base, fn)


def ddt_section(cone: ConeChart) -> SectionField:
    return F.section(vec=F.basis_vector(cone, cone.t_index))


def dt_section(cone: ConeChart) -> SectionField:
    return F.section(form=F.basis_form(cone, cone.t_index))


# -- Psi and the cone structures -------------------------------------------------


def psi(cone: ConeChart, eplus: SectionField, eminus: SectionField,
        f: ScalarField = None) -> GtEndoField:
    """Psi(E+, E-), plus the f d/dt (x) dt - f dt (x) d/dt extension when f is given.

    E+ and E- are sections of the base chart; they are lifted here.
    """
    ep = lift_section(cone, eplus)
    em = lift_section(cone, eminus)
    ddt = ddt_section(cone)
    dt = dt_section(cone)
    out = (
        F.tensor_pair_field(ddt, em)
        - F.tensor_pair_field(em, ddt)
        + F.tensor_pair_field(dt, ep)
        - F.tensor_pair_field(ep, dt)
    )
    if f is not None:
        flift = lift_scalar(cone, f)
        out = out + flift * (F.tensor_pair_field(dt, ddt) - F.tensor_pair_field(ddt, dt))
    return out


def psi_f(cone: ConeChart, s: FGacs) -> GtEndoField:
    return psi(cone, s.Eplus, s.Eminus, s.f)


def i_prime(s: Union[Gacs, FGacs], cone: ConeChart = None) -> ConeGacx:
    """I' = Phi^f + Psi^f(E+^f, E-^f) on the cone."""
    if isinstance(s, Gacs):
        s = FGacs.of_gacs(s)
    if cone is None:
        cone = ConeChart.over(s.chart)
    return ConeGacx(cone, lift_endo(cone, s.Phi) + psi_f(cone, s))


def cone_gacx(s: Gacs, cone: ConeChart = None) -> ConeGacx:
    """Phi + Psi(E+, E-): the unconjugated cone structure of a Gacs."""
    return i_prime(s, cone)


def r_endo(cone: ConeChart) -> GtEndoField:
    """R = diag(e^-t on all vectors, e^t on all forms), t slots included."""
    return _r_pow(cone, 1)


def _r_pow(cone: ConeChart, sign: int) -> GtEndoField:
    N = cone.dim
    ti = cone.t_index

    def fn(p):
        t = J.seed_point(p, N)[ti]
        em = J.exp(-sign * t)
        ep = J.exp(sign * t)
        parts = [em] * N + [ep] * N
        stacked = J.stack(parts)
        eye = J.lift(np.eye(2 * N), N)
        return J.jet_einsum("i,ij->ij", stacked, eye)

    return GtEndoField(cone, fn)


def r_conjugate(j: ConeGacx) -> ConeGacx:
    r = r_endo(j.chart)
    rinv = _r_pow(j.chart, -1)
    return ConeGacx(j.chart, r @ j.J @ rinv)


def i_map(s: Union[Gacs, FGacs], cone: ConeChart = None) -> ConeGacx:
    """I = R (Phi^f + Psi^f) R^-1, the Sasaki-flavoured cone structure."""
    return r_conjugate(i_prime(s, cone))


def gacx_check(j: ConeGacx, points) -> ResidualReport:
    """J + J* = 0 and J^2 = -id at cone sample points."""
    rep = ResidualReport()
    N = j.chart.dim
    adj = j.J.adjoint()

    def row(p):
        m = j.J.values(p)
        a = adj.values(p)
        return [np.abs(m + a).max(), np.abs(m @ m + np.eye(2 * N)).max()]

    vals = np.array(map_points(row, points))
    rep.add("gacx.skew", vals[:, 0], points, 1e-9)
    rep.add("gacx.square", vals[:, 1], points, 1e-9)
    return rep


# -- the t-invariant decomposition (one-to-one correspondence) -------------------


def t_dependence(j: ConeGacx, points) -> float:
    """Max |d/dt entry| of J over the sample points."""
    ti = j.chart.t_index
    worst = 0.0
    for p in points:
        jet = j.J.at(p).require(1)
        worst = max(worst, float(np.abs(jet.grad[..., ti]).max()))
    return worst


def cone_decompose(j: ConeGacx, points=None, tol: float = 1e-8) -> Union[Gacs, FGacs]:
    """Extract (J_M, B, A, h) from a t-invariant cone structure.

    Returns the Gacs (J_M, E+ = B, E- = A) when h vanishes, otherwise the
    FGacs with f = h.  Raises if J depends on t or does not have the
    displayed normal form.
    """
    cone = j.chart
    base = cone.base
    n = base.dim
    N = cone.dim
    if points is None:
        points = [np.concatenate([q, [t]]) for q in base.sample(seed=5, count=8)
                  for t in (-0.5, 0.25)]
    td = t_dependence(j, points)
    if td > T_INDEPENDENCE_TOL:
        raise ValueError(f"structure depends on t (max |d_t J| = {td:.2e})")

    rows = _m_indices(n)
    t0 = 0.0

    def at_base(p):
        return j.J.at(np.concatenate([p, [t0]]))

    def b_fn(p):
        col = at_base(p)[:, n]  # J(d/dt)
        return J.restrict_vars(-col[rows], n)

    def a_fn(p):
        col = at_base(p)[:, 2 * n + 1]  # J(dt)
        return J.restrict_vars(-col[rows], n)

    def h_fn(p):
        col = at_base(p)[:, n]
        return J.restrict_vars(-col[n], n)

    def jm_fn(p):
        m = at_base(p)
        return J.restrict_vars(m[rows][:, rows], n)

    B = SectionField(base, b_fn)
    A = SectionField(base, a_fn)
    h = ScalarField(base, h_fn)
    Jm = GtEndoField(base, jm_fn)

    # extraction consistency: the displayed form must reproduce J
    rebuilt = i_prime(FGacs(base, Jm, B, A, h), cone)
    worst = 0.0
    for p in points:
        worst = max(worst, float(np.abs(rebuilt.J.values(p) - j.J.values(p)).max()))
    if worst > 1e-7:
        raise ValueError(
            f"J is not of the displayed t-invariant normal form (residual {worst:.2e})"
        )

    h_vals = [abs(complex(h.values(q))) for q in base.sample(seed=9, count=12)]
    if max(h_vals) < tol:
        return Gacs(base, Jm, B, A)
    return FGacs(base, Jm, B, A, h)


# -- cone frames ------------------------------------------------------------------


def cone_plus_frame(cone: ConeChart, frame_e10, eplus: SectionField,
                    eminus: SectionField, conjugated: bool) -> List[SectionField]:
    """The +i frame {E10, E+ - i d/dt, E- - i dt} of Phi + Psi, optionally R-scaled."""
    members = [lift_section(cone, a) for a in frame_e10]
    members.append(lift_section(cone, eplus) - 1j * ddt_section(cone))
    members.append(lift_section(cone, eminus) - 1j * dt_section(cone))
    if conjugated:
        r = r_endo(cone)
        members = [r.apply(m) for m in members]
    return members


def gacx_plus_frame(j: ConeGacx, base_point=None) -> List[SectionField]:
    """Pivot-selected frame of the +i eigenbundle of a cone structure.

    Projects the coordinate sections through (1 - i J)/2 and keeps a maximal
    independent subset chosen at the base point.
    """
    from .structures import _pivot_columns

    cone = j.chart
    N = cone.dim
    if base_point is None:
        base_point = cone.sample(seed=0, count=1)[0]
    candidates = [0.5 * (u - 1j * j.J.apply(u)) for u in F.coordinate_sections(cone)]
    mat = np.stack([c.values(base_point) for c in candidates], axis=1)
    cols = _pivot_columns(mat, N)
    if len(cols) < N:
        raise ValueError(f"cone eigenframe rank dropped to {len(cols)} (< {N})")
    return [candidates[i] for i in cols]
