"""Generalized (almost) contact structures on a chart and their checkers.

Checkers never raise on mathematical failure: they return a
:class:`~gencontact.report.ResidualReport` whose rows carry max/mean
residuals over the sampled points.  Constructors validate their inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import fields as F
from . import gta
from . import jets as J
from .charts import Chart
from .fields import (
    GtEndoField,
    MatrixField,
    OneFormField,
    ScalarField,
    SectionField,
    TwoFormField,
    VectorField,
)
from .report import ResidualReport, map_points

DEFAULT_TOL = 1e-8
PIVOT_TOL = 1e-6


# -- structure records --------------------------------------------------------


@dataclass(frozen=True)
class AlmostContactMetric:
    """Classical (phi, xi, eta) triple, optionally with a compatible metric."""

    chart: Chart
    phi: MatrixField
    xi: VectorField
    eta: OneFormField
    g: Optional[MatrixField] = None

    @property
    def theta(self) -> TwoFormField:
        """The fundamental 2-form theta(X, Y) = g(X, phi Y)."""
        if self.g is None:
            raise ValueError("structure has no metric")
        g, phi = self.g, self.phi
        return TwoFormField(self.chart, lambda p: J.jet_einsum("ik,kj->ij", g.at(p), phi.at(p)))

    def flipped(self) -> "AlmostContactMetric":
        return AlmostContactMetric(self.chart, -self.phi, self.xi, self.eta, self.g)


@dataclass(frozen=True)
class Gacs:
    chart: Chart
    Phi: GtEndoField
    Eplus: SectionField
    Eminus: SectionField


@dataclass(frozen=True)
class FGacs:
    """Generalized f-almost contact structure (Phi^f, E+^f, E-^f, f)."""

    chart: Chart
    Phi: GtEndoField
    Eplus: SectionField
    Eminus: SectionField
    f: ScalarField

    @staticmethod
    def of_gacs(s: Gacs) -> "FGacs":
        return FGacs(s.chart, s.Phi, s.Eplus, s.Eminus, F.constant(s.chart, 0))

    def as_gacs(self) -> Gacs:
        return Gacs(self.chart, self.Phi, self.Eplus, self.Eminus)


@dataclass(frozen=True)
class GeneralizedMetric:
    chart: Chart
    endo: GtEndoField
    g: Optional[MatrixField] = None
    b: Optional[TwoFormField] = None


@dataclass(frozen=True)
class Gacm:
    gacs: Gacs
    metric: GeneralizedMetric

    @property
    def chart(self) -> Chart:
        return self.gacs.chart

    @property
    def Phi(self) -> GtEndoField:
        return self.gacs.Phi

    @property
    def Eplus(self) -> SectionField:
        return self.gacs.Eplus

    @property
    def Eminus(self) -> SectionField:
        return self.gacs.Eminus

    @property
    def G(self) -> GtEndoField:
        return self.metric.endo


@dataclass(frozen=True)
class EigenFrame:
    """Chart-wide frame of the +i eigenbundle plus the kernel sections."""

    e10: Tuple[SectionField, ...]
    eplus: SectionField
    eminus: SectionField
    pivots: Tuple[int, ...]

    @property
    def l_plus(self) -> Tuple[SectionField, ...]:
        return self.e10 + (self.eplus,)

    @property
    def l_minus(self) -> Tuple[SectionField, ...]:
        return self.e10 + (self.eminus,)


# -- classical checkers ---------------------------------------------------------


def acms_check(acs: AlmostContactMetric, points) -> ResidualReport:
    """eta(xi) = 1, phi^2 = -id + xi (x) eta, and metric compatibility."""
    n = acs.chart.dim
    rep = ResidualReport()

    def row(p):
        phi = acs.phi.values(p)
        xi = acs.xi.values(p)
        eta = acs.eta.values(p)
        r_unit = abs(eta @ xi - 1.0)
        r_square = np.abs(phi @ phi + np.eye(n) - np.outer(xi, eta)).max()
        out = [r_unit, r_square]
        if acs.g is not None:
            g = acs.g.values(p)
            out.append(np.abs(g - g.T).max())
            out.append(np.abs(phi.T @ g @ phi - g + np.outer(eta, eta)).max())
        return out

    vals = np.array(map_points(row, points))
    rep.add("acs.unit", vals[:, 0], points, DEFAULT_TOL)
    rep.add("acs.square", vals[:, 1], points, DEFAULT_TOL)
    if acs.g is not None:
        rep.add("acs.metric_symmetric", vals[:, 2], points, DEFAULT_TOL)
        rep.add("acs.metric_compatible", vals[:, 3], points, DEFAULT_TOL)
    return rep


# -- constructors ---------------------------------------------------------------


def gacs_from_acs(acs: AlmostContactMetric, check_points=None) -> Gacs:
    """Example-3.3 lift: Phi = diag(phi, -phi*), E+ = xi, E- = eta."""
    chart = acs.chart
    if check_points is not None:
        rep = acms_check(acs, check_points)
        if not rep.passed:
            raise ValueError(f"input fails the almost-contact axioms:\n{rep.summary()}")
    zero = F.matrix_field(chart, [[F.constant(chart, 0)] * chart.dim for _ in range(chart.dim)])
    phi_star = acs.phi.transpose()
    Phi = F.endo_from_blocks(acs.phi, zero, zero, -phi_star)
    return Gacs(chart, Phi, F.section(vec=acs.xi), F.section(form=acs.eta))


def reeb_field(eta: OneFormField) -> VectorField:
    """The unique xi with i_xi d(eta) = 0 and eta(xi) = 1, via rho^-1."""
    chart = eta.chart

    def fn(p):
        rho = _rho_jet(eta, p)
        return J.jet_einsum("ij,j->i", J.jet_inv(rho), -eta.at(p))

    return VectorField(chart, fn)


def _rho_jet(eta: OneFormField, p) -> J.JetArray:
    """Matrix jet of rho(X) = i_X d(eta) - eta(X) eta (column-vector action)."""
    deta = F.d_jet(eta.at(p), 1)
    ej = eta.at(p)
    pmat = deta - J.jet_einsum("i,j->ij", ej, ej)  # rows: input slot
    return F._jT(pmat)


def contact_volume(eta: OneFormField, point) -> complex:
    """Coefficient of eta ^ (d eta)^k against the coordinate volume form."""
    n = eta.chart.dim
    if n % 2 != 1:
        raise ValueError("contact charts must be odd-dimensional")
    k = (n - 1) // 2
    ev = eta.values(point)
    dv = F.d(eta).values(point)
    total = 0.0 + 0.0j
    from itertools import permutations

    for perm in permutations(range(n)):
        sign = _perm_sign(perm)
        term = ev[perm[0]]
        for m in range(k):
            term = term * dv[perm[1 + 2 * m], perm[2 + 2 * m]]
        total += sign * term
    # normalisation: eta ^ (d eta)^k in determinant convention double counts
    # each d eta slot pair; report the raw antisymmetrised coefficient
    return complex(total)


def _perm_sign(perm) -> int:
    perm = list(perm)
    sign = 1
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            sign = -sign
    return sign


def gacs_from_contact(eta: OneFormField, check_points=None) -> Gacs:
    """Example-3.4 lift of a contact form: Phi = (0, pi; d eta, 0), E+ = eta, E- = xi."""
    chart = eta.chart
    n = chart.dim
    if n % 2 != 1:
        raise ValueError("contact structures need an odd-dimensional chart")
    if check_points is not None:
        for p in check_points:
            rho = _rho_jet(eta, p)
            if abs(np.linalg.det(rho.value)) < 1e-10:
                raise ValueError(f"eta is not contact at {p}: rho is degenerate")
            if abs(contact_volume(eta, p)) < 1e-10:
                raise ValueError(f"eta ^ (d eta)^k vanishes at {p}")

    def phi_fn(p):
        deta = F.d_jet(eta.at(p), 1)
        rho_inv = J.jet_inv(_rho_jet(eta, p))
        # pi(alpha, beta) = d eta(rho^-1 alpha, rho^-1 beta).  The bivector
        # and 2-form blocks of the structure matrix contract in the second
        # slot, (TC alpha)^j = pi(dx^j, alpha) and (CT X)_j = d eta(dx_j, X):
        # the opposite sign from the i_X convention of e^B.  This is forced:
        # the +-Phi ambiguity is invisible to every axiom, and only this
        # orientation makes the cone lift of the warped Kaehler example
        # integrable alongside Psi's displayed block matrix.
        pi = J.jet_einsum("kl,ki->il", deta, rho_inv)
        pi = J.jet_einsum("il,lj->ij", pi, rho_inv)
        tc = -F._jT(pi)
        ct = -F._jT(deta)
        zero = J.lift(np.zeros((n, n)), n)
        top = F.jconcat([zero, tc], axis=1)
        bot = F.jconcat([ct, zero], axis=1)
        return F.jconcat([top, bot], axis=0)

    Phi = GtEndoField(chart, phi_fn)
    return Gacs(chart, Phi, F.section(form=eta), F.section(vec=reeb_field(eta)))


def gmetric_from_gb(g: MatrixField, b: Optional[TwoFormField] = None) -> GeneralizedMetric:
    """G(g, b) = e^b (0, g^-1; g, 0) e^-b for a Riemannian g and 2-form b."""
    chart = g.chart
    n = chart.dim
    if b is None:
        b = F.zero_two_form(chart)

    def fn(p):
        gj = g.at(p)
        gval = gj.value
        if np.abs(gval - gval.T).max() > 1e-10:
            raise ValueError("metric must be symmetric")
        if np.linalg.eigvalsh(gval.real).min() <= 0:
            raise ValueError("metric must be positive definite at sample points")
        ginv = J.jet_inv(gj)
        zero = J.lift(np.zeros((n, n)), n)
        mid = F.jconcat(
            [F.jconcat([zero, ginv], axis=1), F.jconcat([gj, zero], axis=1)], axis=0
        )
        eb = F.b_endo(b).at(p)
        ebinv = F.b_endo(-b).at(p)
        return J.jet_einsum("ij,jk->ik", J.jet_einsum("ij,jk->ik", eb, mid), ebinv)

    return GeneralizedMetric(chart, GtEndoField(chart, fn), g=g, b=b)


def b_transform(s: Gacs, b: TwoFormField) -> Gacs:
    """(e^B Phi e^-B, e^B E+, e^B E-): closed under the Gacs axioms for any smooth B."""
    eb = F.b_endo(b)
    ebinv = F.b_endo(-b)
    return Gacs(s.chart, eb @ s.Phi @ ebinv, eb.apply(s.Eplus), eb.apply(s.Eminus))


def b_transform_gacm(m: Gacm, b: TwoFormField) -> Gacm:
    eb = F.b_endo(b)
    ebinv = F.b_endo(-b)
    metric = GeneralizedMetric(m.chart, eb @ m.G @ ebinv)
    return Gacm(b_transform(m.gacs, b), metric)


# -- generalized checkers -------------------------------------------------------


def gacs_check(s: Gacs, points) -> ResidualReport:
    """Skewness, normalization, isotropy and the square identity of Def 3.1."""
    n = s.chart.dim
    rep = ResidualReport()

    def row(p):
        phi = s.Phi.gtendo(p)
        ep = s.Eplus.gtvec(p)
        em = s.Eminus.gtvec(p)
        skew = (phi + gta.adjoint(phi)).norm()
        norm = abs(2 * gta.pair(ep, em) - 1.0)
        iso = max(abs(gta.pair(ep, ep)), abs(gta.pair(em, em)))
        square = (
            phi @ phi
            - (-gta.identity(n) + gta.tensor_pair(ep, em) + gta.tensor_pair(em, ep))
        ).norm()
        return [skew, norm, iso, square]

    vals = np.array(map_points(row, points))
    rep.add("gacs.skew", vals[:, 0], points, DEFAULT_TOL)
    rep.add("gacs.normalization", vals[:, 1], points, DEFAULT_TOL)
    rep.add("gacs.isotropy", vals[:, 2], points, DEFAULT_TOL)
    rep.add("gacs.square", vals[:, 3], points, DEFAULT_TOL)
    return rep


def phi_kernel_check(s: Gacs, points) -> ResidualReport:
    """Phi(E+) = Phi(E-) = 0, an axiom consequence for every valid structure."""
    rep = ResidualReport()

    def row(p):
        phi = s.Phi.gtendo(p)
        return [phi(s.Eplus.gtvec(p)).norm(), phi(s.Eminus.gtvec(p)).norm()]

    vals = np.array(map_points(row, points))
    rep.add("gacs.phi_eplus", vals[:, 0], points, DEFAULT_TOL)
    rep.add("gacs.phi_eminus", vals[:, 1], points, DEFAULT_TOL)
    return rep


def phi_cube_check(s: Gacs, points) -> ResidualReport:
    rep = ResidualReport()

    def row(p):
        phi = s.Phi.gtendo(p)
        return (phi @ phi @ phi + phi).norm()

    rep.add("gacs.phi_cubed", map_points(row, points), points, 1e-9)
    return rep


def gmetric_check(metric: GeneralizedMetric, points, probes: int = 200,
                  seed: int = 23) -> ResidualReport:
    """G* = G, G^2 = id, and Monte-Carlo positivity of <G A, A>."""
    n = metric.chart.dim
    rep = ResidualReport()
    rng = np.random.default_rng(seed)
    probe_vecs = rng.normal(size=(probes, 2 * n))

    def row(p):
        g = metric.endo.gtendo(p)
        sym = (g - gta.adjoint(g)).norm()
        square = (g @ g - gta.identity(n)).norm()
        vals = np.einsum("ai,ij,aj->a", probe_vecs, _pairing_gram(g.mat, n), probe_vecs)
        min_pos = float(vals.real.min())
        return [sym, square, min_pos]

    vals = np.array(map_points(row, points))
    rep.add("gmetric.symmetric", vals[:, 0], points, DEFAULT_TOL)
    rep.add("gmetric.square", vals[:, 1], points, DEFAULT_TOL)
    worst = float(vals[:, 2].min())
    rep.add("gmetric.positivity", [max(0.0, -worst)], None, 1e-12)
    return rep


def _pairing_gram(mat: np.ndarray, n: int) -> np.ndarray:
    """Matrix of (A, B) -> <G A, B> in the 2n coordinates."""
    swap = np.zeros((2 * n, 2 * n))
    swap[:n, n:] = np.eye(n)
    swap[n:, :n] = np.eye(n)
    return 0.25 * (swap @ mat + (swap @ mat).T)


def gacm_check(m: Gacm, points) -> ResidualReport:
    """Def 3.12: -Phi G Phi = G - E+ (x) E+ - E- (x) E-, plus metric axioms.

    The commutation Phi G = G Phi and the swaps G E+- = E-+ are reported as
    informational probes (no pass/fail), per the open question on whether
    they follow from the definition.
    """
    rep = gacs_check(m.gacs, points)
    rep.extend(gmetric_check(m.metric, points))

    def row(p):
        phi = m.Phi.gtendo(p)
        g = m.G.gtendo(p)
        ep = m.Eplus.gtvec(p)
        em = m.Eminus.gtvec(p)
        compat = (
            -1 * (phi @ g @ phi)
            - (g - gta.tensor_pair(ep, ep) - gta.tensor_pair(em, em))
        ).norm()
        comm = (phi @ g - g @ phi).norm()
        swap = max((g(ep) - em).norm(), (g(em) - ep).norm())
        return [compat, comm, swap]

    vals = np.array(map_points(row, points))
    rep.add("gacm.compatibility", vals[:, 0], points, DEFAULT_TOL)
    rep.add("gacm.probe_phi_g_commute", vals[:, 1], points, None)
    rep.add("gacm.probe_g_swaps_e", vals[:, 2], points, None)
    return rep


def dual_gacm(m: Gacm, points=None) -> Gacm:
    """The companion structure (G, G Phi, G E+, G E-)."""
    if points is not None:
        rep = gacm_check(m, points)
        comm = rep["gacm.probe_phi_g_commute"].max_residual
        if not rep.passed or comm > 1e-6:
            raise ValueError(
                f"dual_gacm needs a valid Gacm with Phi G = G Phi (probe {comm:.2e})"
            )
    g = m.G
    dual = Gacs(m.chart, g @ m.Phi, g.apply(m.Eplus), g.apply(m.Eminus))
    return Gacm(dual, m.metric)


# -- eigenframe and involutivity ------------------------------------------------


def eigenframe(s: Gacs, base_point=None, sample_points=None) -> EigenFrame:
    """Chart-wide frame of E^(1,0) by pivoting projected coordinate sections.

    The projector A -> A - 2<A,E->E+ - 2<A,E+>E- kills the E+- components,
    then (1 - i Phi)/2 projects onto the +i eigenbundle.  A maximal
    independent subset of the 2n candidates is chosen once, at the base
    point, and the same columns are reused across the chart.
    """
    chart = s.chart
    n = chart.dim
    if base_point is None:
        base_point = chart.sample(seed=0, count=1)[0]

    candidates = []
    for u in F.coordinate_sections(chart):
        proj = _project_out_kernel(s, u)
        candidates.append(_eigen_project(s, proj))

    mat = np.stack([c.values(base_point) for c in candidates], axis=1)
    pivots = _pivot_columns(mat, n - 1)
    if len(pivots) < n - 1:
        raise ValueError(
            f"eigenframe rank dropped to {len(pivots)} (< {n - 1}) at the base point"
        )
    frame = EigenFrame(
        e10=tuple(candidates[i] for i in pivots),
        eplus=s.Eplus,
        eminus=s.Eminus,
        pivots=tuple(pivots),
    )
    if sample_points is not None:
        for p in sample_points:
            m = np.stack([c.values(p) for c in frame.e10], axis=1)
            if np.linalg.matrix_rank(m, tol=PIVOT_TOL) < n - 1:
                raise ValueError(f"eigenframe rank drops below {n - 1} at {p}")
    return frame


def _project_out_kernel(s: Gacs, u: SectionField) -> SectionField:
    cp = F.pair_field(u, s.Eminus)
    cm = F.pair_field(u, s.Eplus)
    return u - 2 * (cp * s.Eplus) - 2 * (cm * s.Eminus)


def _eigen_project(s: Gacs, u: SectionField) -> SectionField:
    return 0.5 * (u - 1j * s.Phi.apply(u))


def _pivot_columns(mat: np.ndarray, want: int) -> List[int]:
    """Greedy modified Gram-Schmidt column selection with a conditioning floor."""
    m = mat.astype(complex).copy()
    cols = []
    for _ in range(want):
        norms = np.linalg.norm(m, axis=0)
        k = int(np.argmax(norms))
        if norms[k] < PIVOT_TOL:
            break
        cols.append(k)
        q = m[:, k] / norms[k]
        m -= np.outer(q, np.conj(q) @ m)
        m[:, k] = 0.0
    return sorted(cols)


def frame_span_check(s: Gacs, frame: EigenFrame, point) -> int:
    """Rank of e10 + conj(e10) + kernel at a point (should be 2n)."""
    cols = [c.values(point) for c in frame.e10]
    cols += [np.conj(c) for c in cols]
    cols += [frame.eplus.values(point), frame.eminus.values(point)]
    return int(np.linalg.matrix_rank(np.stack(cols, axis=1), tol=1e-8))


def max_nij_over_frame(members: Sequence[SectionField], points) -> Tuple[float, list]:
    """Max |Nij(A,B,C)| over distinct frame triples at the sample points.

    Nij is exactly antisymmetric on isotropic frames, so repeated-member
    triples vanish identically and only i<j<k is sampled.
    """
    triples = list(combinations(range(len(members)), 3))
    if not triples:
        return 0.0, [0.0 for _ in points]
    n = members[0].chart.dim
    per_point = []
    for p in points:
        jets = [mm.at(p) for mm in members]
        worst = 0.0
        for i, j, k in triples:
            worst = max(worst, abs(F.nij_jets(jets[i], jets[j], jets[k], n).value))
        per_point.append(worst)
    return float(max(per_point)), per_point


def involutivity_class(s: Gacs, points, tol: float = 1e-7,
                       frame: Optional[EigenFrame] = None):
    """Classify Courant involutivity of L+ and L-: strong / contact(+-) / none."""
    if frame is None:
        frame = eigenframe(s)
    rep = ResidualReport()
    plus, per_plus = max_nij_over_frame(frame.l_plus, points)
    minus, per_minus = max_nij_over_frame(frame.l_minus, points)
    rep.add("involutivity.l_plus", per_plus, points, tol)
    rep.add("involutivity.l_minus", per_minus, points, tol)
    if plus < tol and minus < tol:
        label = "strong"
    elif plus < tol:
        label = "contact(+)"
    elif minus < tol:
        label = "contact(-)"
    else:
        label = "none"
    return label, rep
