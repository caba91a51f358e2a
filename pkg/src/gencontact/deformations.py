"""Generalized f-almost contact structures and their K(kappa) deformation algebra.

The K-deformations act on M; their cone meaning (B-fields of 2r dr ^ kappa,
cross terms of the cone metric) is verified by the correspondence checkers
here.  Tensor terms like kappa (x) E- in the deformation formulas contract
in the second slot, as forced by the eigenvalue axioms Phi^f E+- = +-f E+-.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Tuple

import numpy as np

from . import fields as F
from . import jets as J
from .charts import Chart, ConeChart
from .cone import cone_points, gacx_plus_frame, i_map, i_prime, lift_form
from .fields import (
    GtEndoField,
    MatrixField,
    OneFormField,
    ScalarField,
    SectionField,
    TwoFormField,
)
from .report import ResidualReport, map_points
from .structures import DEFAULT_TOL, FGacs, Gacm, Gacs, dual_gacm, gmetric_from_gb

INT_TOL = 1e-7


@dataclass(frozen=True)
class FGacm:
    """A generalized f-almost contact metric structure with its witness data.

    The witness is constructive: fgacs = K-(beta)(K+(alpha)(Phi, E+-, 0))
    for the stored Gacm.
    """

    gacm: Gacm
    alpha: OneFormField
    beta: OneFormField
    fgacs: FGacs

    @staticmethod
    def from_witness(m: Gacm, alpha: OneFormField, beta: OneFormField) -> "FGacm":
        s = k_minus(k_plus(FGacs.of_gacs(m.gacs), alpha), beta)
        return FGacm(m, alpha, beta, s)


# -- the defining axioms ----------------------------------------------------------


def fgacs_check(s: FGacs, points) -> ResidualReport:
    """The six defining residuals of a generalized f-almost contact structure."""
    from . import gta

    n = s.chart.dim
    rep = ResidualReport()

    def row(p):
        phi = s.Phi.gtendo(p)
        ep = s.Eplus.gtvec(p)
        em = s.Eminus.gtvec(p)
        f = complex(s.f.values(p))
        skew = (phi + gta.adjoint(phi)).norm()
        square = (
            phi @ phi
            - (-gta.identity(n) + gta.tensor_pair(ep, em) + gta.tensor_pair(em, ep))
        ).norm()
        eig_p = (phi(ep) - f * ep).norm()
        eig_m = (phi(em) + f * em).norm()
        norm = abs(2 * gta.pair(ep, em) - 1.0 - f * f)
        iso = max(abs(gta.pair(ep, ep)), abs(gta.pair(em, em)))
        return [skew, square, eig_p, eig_m, norm, iso]

    vals = np.array(map_points(row, points))
    names = ["skew", "square", "eigen_plus", "eigen_minus", "normalization", "isotropy"]
    for i, name in enumerate(names):
        rep.add(f"fgacs.{name}", vals[:, i], points, DEFAULT_TOL)
    return rep


# -- K deformations ----------------------------------------------------------------


def _kappa_section(s_chart: Chart, kappa: OneFormField) -> SectionField:
    return F.section(form=kappa)


def k_minus(s: FGacs, kappa: OneFormField) -> FGacs:
    """K-(kappa): fixes E-, shifts f by 2<E-, kappa>."""
    ks = _kappa_section(s.chart, kappa)
    c = F.pair_field(s.Eminus, ks)  # <E-, kappa>
    phi = s.Phi - F.tensor_pair_field(s.Eminus, ks) + F.tensor_pair_field(ks, s.Eminus)
    eplus = s.Eplus + s.Phi.apply(ks) + 2 * (c * ks) + s.f * ks
    f = s.f + 2 * c
    return FGacs(s.chart, phi, eplus, s.Eminus, f)


def k_plus(s: FGacs, kappa: OneFormField) -> FGacs:
    """K+(kappa): fixes E+, shifts f by -2<E+, kappa>."""
    ks = _kappa_section(s.chart, kappa)
    c = F.pair_field(s.Eplus, ks)  # <E+, kappa>
    phi = s.Phi - F.tensor_pair_field(s.Eplus, ks) + F.tensor_pair_field(ks, s.Eplus)
    eminus = s.Eminus + s.Phi.apply(ks) + 2 * (c * ks) - s.f * ks
    f = s.f - 2 * c
    return FGacs(s.chart, phi, s.Eplus, eminus, f)


def b_transform_fgacs(s: FGacs, b: TwoFormField) -> FGacs:
    """Slot-wise B-field action: conjugate Phi^f, map E+-^f, keep f."""
    eb = F.b_endo(b)
    ebinv = F.b_endo(-1 * b)
    return FGacs(s.chart, eb @ s.Phi @ ebinv, eb.apply(s.Eplus), eb.apply(s.Eminus), s.f)


def fgacs_deviation(a: FGacs, b: FGacs, points) -> float:
    """Max slot-wise difference of two f-structures over the samples."""
    worst = 0.0
    for p in points:
        worst = max(
            worst,
            float(np.abs(a.Phi.values(p) - b.Phi.values(p)).max()),
            float(np.abs(a.Eplus.values(p) - b.Eplus.values(p)).max()),
            float(np.abs(a.Eminus.values(p) - b.Eminus.values(p)).max()),
            float(np.abs(a.f.values(p) - b.f.values(p))),
        )
    return worst


def b_commute_check(s: FGacs, kappa: OneFormField, b: TwoFormField, points) -> ResidualReport:
    """K+-(kappa) deformations commute with B-field transformations."""
    rep = ResidualReport()
    for name, k in (("k_minus", k_minus), ("k_plus", k_plus)):
        lhs = b_transform_fgacs(k(s, kappa), b)
        rhs = k(b_transform_fgacs(s, b), kappa)
        rep.add(f"b_commute.{name}", [fgacs_deviation(lhs, rhs, points)], None, 1e-10)
    return rep


# -- normalization to f = 0 ----------------------------------------------------------


def normalize(s: FGacs, points, tol: float = 1e-9) -> Tuple[Gacs, OneFormField, OneFormField]:
    """Find alpha with 2<E+^f + E-^f, alpha> = f and strip f via K-( -alpha) K+(alpha).

    alpha is the Euclidean dual of the combined vector part zeta, scaled to
    alpha(zeta) = f; beta = -alpha.  Errors out where zeta degenerates while
    f does not vanish, since no pointwise alpha can exist there.
    """
    n = s.chart.dim

    def zeta_jet(p):
        return (s.Eplus.at(p) + s.Eminus.at(p))[:n]

    for p in points:
        z = zeta_jet(p).value
        den = complex(z @ z)
        fval = complex(s.f.values(p))
        if abs(den) < 1e-12 and abs(fval) > tol:
            raise ValueError(
                f"normalization impossible at {p}: zeta vanishes while f = {fval:.3e}"
            )

    def alpha_fn(p):
        z = zeta_jet(p)
        den = J.jet_einsum("i,i->", z, z)
        fj = s.f.at(p)
        return J.jet_einsum(",i->i", fj / den, z)

    alpha = OneFormField(s.chart, alpha_fn)
    beta = -1 * alpha
    out = k_minus(k_plus(s, alpha), beta)
    worst = max(abs(complex(out.f.values(p))) for p in points)
    if worst > tol:
        raise ValueError(f"normalization left |f| = {worst:.3e} > {tol:g}")
    return out.as_gacs(), alpha, beta


# -- cone B-field correspondence ------------------------------------------------------


def cone_kappa_form(cone: ConeChart, kappa: OneFormField, radial: bool) -> TwoFormField:
    """The 2-form 2r dr ^ kappa (radial=True) or (2/r) dr ^ kappa on the cone.

    In t-coordinates these are the tensors e^{2t} (dt (x) kappa - kappa (x) dt)
    and dt (x) kappa - kappa (x) dt.
    """
    base_wedge = F.wedge11(F.basis_form(cone, cone.t_index), lift_form(cone, kappa))
    if not radial:
        return base_wedge
    t = F.coordinate(cone, cone.t_index)
    scale = ScalarField(cone, lambda p: J.exp(2 * t.at(p)))
    return scale * base_wedge


def cone_b_correspondence(s: FGacs, kappa: OneFormField, base_points,
                          ts=(-0.5, 0.0, 0.5), tol: float = 1e-9) -> ResidualReport:
    """e^B I(s) e^-B = I(K-(kappa) s) for B = 2r dr ^ kappa, and the
    unconjugated variant with (2/r) dr ^ kappa against I' = Phi + Psi^f."""
    cone = ConeChart.over(s.chart)
    cpts = cone_points(base_points, ts)
    deformed = k_minus(s, kappa)
    rep = ResidualReport()
    for name, radial, builder in (
        ("radial_vs_I", True, i_map),
        ("plain_vs_Iprime", False, i_prime),
    ):
        b = cone_kappa_form(cone, kappa, radial)
        eb = F.b_endo(b)
        ebinv = F.b_endo(-1 * b)
        lhs = eb @ builder(s, cone).J @ ebinv
        rhs = builder(deformed, cone).J
        vals = [float(np.abs(lhs.values(p) - rhs.values(p)).max()) for p in cpts]
        rep.add(f"cone_b.{name}", vals, cpts, tol)
    return rep


# -- the cone metric with a cross term --------------------------------------------------


def g_tilde(g: MatrixField, alpha: OneFormField, cone: ConeChart) -> GtEndoField:
    """G~_alpha = (0, g_hat^-1; g_hat, 0) with g_hat = g + (alpha+dt) (x) (alpha+dt).

    This is the displayed block formula: the inverse block expands to
    g^-1 - g^-1 alpha (x) d/dt - d/dt (x) g^-1 alpha + (1 + g^-1(alpha,alpha))
    d/dt (x) d/dt.
    """
    n = g.chart.dim
    N = cone.dim

    def ghat_fn(p):
        q = p[:n]
        gj = J.extend_vars(g.at(q), N)
        pad = F.jconcat(
            [
                F.jconcat([gj, J.lift(np.zeros((n, 1)), N)], axis=1),
                F.jconcat([J.lift(np.zeros((1, n)), N), J.lift(np.zeros((1, 1)), N)], axis=1),
            ],
            axis=0,
        )
        aj = J.extend_vars(alpha.at(q), N)
        beta = F.jconcat([aj, J.lift(np.ones(1), N)])
        return pad + J.jet_einsum("i,j->ij", beta, beta)

    ghat = MatrixField(cone, ghat_fn)

    def endo_fn(p):
        gj = ghat.at(p)
        ginv = J.jet_inv(gj)
        zero = J.lift(np.zeros((N, N)), N)
        return F.jconcat(
            [F.jconcat([zero, ginv], axis=1), F.jconcat([gj, zero], axis=1)], axis=0
        )

    return GtEndoField(cone, endo_fn)


def cross_term_metric_check(s: FGacs, g: MatrixField, alpha: OneFormField, base_points,
                 ts=(-0.4, 0.2), tol: float = DEFAULT_TOL) -> ResidualReport:
    """Compatibility G~ = -I' G~ I' plus the two derived identities.

    The identities 2<E+^f, alpha> = -f and Phi^f alpha = -G E+^f + E-^f hold
    exactly when (Phi^f, E+-^f, f) = K+(alpha)(Phi, E+-, 0) for a metric
    structure with G = (0, g^-1; g, 0).
    """
    cone = ConeChart.over(s.chart)
    rep = ResidualReport()
    gt = g_tilde(g, alpha, cone)
    ip = i_prime(s, cone).J
    cpts = cone_points(base_points, ts)

    def compat(p):
        gv = gt.values(p)
        iv = ip.values(p)
        return float(np.abs(gv + iv @ gv @ iv).max())

    rep.add("cross_term.compatibility", [compat(p) for p in cpts], cpts, tol)

    gmet = gmetric_from_gb(g).endo
    aks = F.section(form=alpha)

    def ident(p):
        ep = s.Eplus.at(p)
        em = s.Eminus.at(p)
        a = aks.at(p)
        f = complex(s.f.values(p))
        n = s.chart.dim
        i1 = abs(2 * complex(F.pair_jets(ep, a, n).value) + f)
        phia = s.Phi.at(p)
        lhs = J.jet_einsum("ij,j->i", phia, a).value
        rhs = -gmet.at(p).value @ ep.value + em.value
        i2 = float(np.abs(lhs - rhs).max())
        return [i1, i2]

    vals = np.array([ident(p) for p in base_points])
    rep.add("cross_term.pairing_identity", vals[:, 0], base_points, tol)
    rep.add("cross_term.phi_alpha_identity", vals[:, 1], base_points, tol)
    return rep


def cross_term_metric_forward(m: Gacm, alpha: OneFormField, base_points,
                   ts=(-0.4, 0.2), tol: float = DEFAULT_TOL):
    """Construct K+(alpha)(Phi, E+-, 0) from a (g, b=0) metric structure and check."""
    if m.metric.g is None:
        raise ValueError("forward construction needs the metric in (g, b) form")
    if m.metric.b is not None:
        probe = m.chart.sample(seed=3, count=3)
        if max(float(np.abs(m.metric.b.values(p)).max()) for p in probe) > 1e-12:
            raise ValueError("the cross-term construction needs b = 0")
    s = k_plus(FGacs.of_gacs(m.gacs), alpha)
    return s, cross_term_metric_check(s, m.metric.g, alpha, base_points, ts, tol)


# -- the deformed cone pair is generalized Kaehler ----------------------------------------


def cone_kahler_pair_check(m: Gacm, alpha: OneFormField, base_points, ts=(-0.4, 0.2),
                 tol: float = 1e-9, probes: int = 50, seed: int = 77) -> ResidualReport:
    """I'(K+(alpha)(Phi,E+-,0)) and I'(K+(alpha)(G Phi, G E+-, 0)) commute and
    -I'1 I'2 is a generalized Riemannian metric on the cone."""
    cone = ConeChart.over(m.chart)
    s1 = k_plus(FGacs.of_gacs(m.gacs), alpha)
    s2 = k_plus(FGacs.of_gacs(dual_gacm(m).gacs), alpha)
    i1 = i_prime(s1, cone).J
    i2 = i_prime(s2, cone).J
    cpts = cone_points(base_points, ts)
    rep = ResidualReport()
    rng = np.random.default_rng(seed)
    N = cone.dim
    probe_vecs = rng.normal(size=(probes, 2 * N))
    swap = np.zeros((2 * N, 2 * N))
    swap[:N, N:] = np.eye(N)
    swap[N:, :N] = np.eye(N)

    comm, sym, minpos = [], [], []
    for p in cpts:
        a = i1.values(p)
        b = i2.values(p)
        comm.append(float(np.abs(a @ b - b @ a).max()))
        gprod = -a @ b
        gram = 0.25 * (swap @ gprod + (swap @ gprod).T)
        sym.append(float(np.abs(gprod - _adjoint_mat(gprod, N)).max()))
        quad = np.einsum("ai,ij,aj->a", probe_vecs, gram, probe_vecs)
        minpos.append(float(quad.real.min()))
    rep.add("cone_pair.commutator", comm, cpts, tol)
    rep.add("cone_pair.product_symmetric", sym, cpts, tol)
    worst = min(minpos)
    rep.add("cone_pair.positivity", [max(0.0, -worst)], None, 1e-12)
    return rep


def _adjoint_mat(mat: np.ndarray, n: int) -> np.ndarray:
    out = mat.T.copy()
    return np.block([[out[n:, n:], out[n:, :n]], [out[:n, n:], out[:n, :n]]])


# -- f-Sasakian --------------------------------------------------------------------------


def f_sasakian_check(fm: FGacm, base_points, ts=(-0.4, 0.2),
                     tol: float = INT_TOL) -> ResidualReport:
    """Courant involutivity of the +i frames of both I-structures of an FGacm."""
    m = fm.gacm
    cone = ConeChart.over(m.chart)
    rep = ResidualReport()
    branches = (
        ("phi", FGacs.of_gacs(m.gacs)),
        ("gphi", FGacs.of_gacs(dual_gacm(m).gacs)),
    )
    cpts = cone_points(base_points, ts)
    for tag, base in branches:
        s = k_minus(k_plus(base, fm.alpha), fm.beta)
        j = i_map(s, cone)
        members = gacx_plus_frame(j)
        per_point = []
        N = cone.dim
        for p in cpts:
            jets = [mm.at(p) for mm in members]
            worst = 0.0
            for a, b, c in combinations(range(len(members)), 3):
                worst = max(worst, abs(complex(F.nij_jets(jets[a], jets[b], jets[c], N).value)))
            per_point.append(worst)
        rep.add(f"f_sasakian.{tag}_frame_nij", per_point, cpts, tol)
    return rep
