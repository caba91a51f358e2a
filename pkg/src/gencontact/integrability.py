"""Integrability and Sasakian-type condition checkers.

The cone-side checks evaluate Courant brackets of explicit sections, so
every identity from the R-conjugation computation (the e^-t factors and
the i/2 correction terms) is verified directly rather than assumed.
"integrable" always means: max residual below tolerance over the seeded
sample set and all frame triples, and reports carry the raw residuals.
"""

from __future__ import annotations

from itertools import combinations
from typing import List, Optional

import numpy as np

from . import fields as F
from . import jets as J
from .charts import ConeChart
from .cone import (
    cone_plus_frame,
    cone_points as _cone_points,
    ddt_section,
    dt_section,
    lift_section,
    r_endo,
)
from .fields import MatrixField
from .report import ResidualReport
from .structures import (
    AlmostContactMetric,
    EigenFrame,
    Gacm,
    Gacs,
    eigenframe,
    max_nij_over_frame,
)

INT_TOL = 1e-7
DEFAULT_TS = (-0.5, 0.0, 0.5)


def cone_points(base_points, ts=DEFAULT_TS) -> List[np.ndarray]:
    return _cone_points(base_points, ts)


# -- plain-cone integrability equals strongness -------------------------------------


def plain_cone_check(s: Gacs, base_points, tol: float = INT_TOL,
                     frame: Optional[EigenFrame] = None,
                     ts=DEFAULT_TS) -> ResidualReport:
    """Integrability of Phi + Psi equals strongness plus [[E+, E-]] = 0.

    Reports (a) L+- involutivity residuals, (b) |[[E+, E-]]|, (c) the direct
    Nijenhuis residual of the +i cone frame of Phi + Psi, and asserts the
    two verdicts agree.
    """
    if frame is None:
        frame = eigenframe(s)
    rep = ResidualReport()
    plus, per_plus = max_nij_over_frame(frame.l_plus, base_points)
    minus, per_minus = max_nij_over_frame(frame.l_minus, base_points)
    rep.add("plain_cone.l_plus_nij", per_plus, base_points, tol)
    rep.add("plain_cone.l_minus_nij", per_minus, base_points, tol)

    bracket = F.courant(s.Eplus, s.Eminus)
    per_bracket = [float(np.abs(bracket.values(p)).max()) for p in base_points]
    rep.add("plain_cone.e_plus_minus_bracket", per_bracket, base_points, tol)

    cone = ConeChart.over(s.chart)
    members = cone_plus_frame(cone, frame.e10, s.Eplus, s.Eminus, conjugated=False)
    cpts = cone_points(base_points, ts)
    direct, per_direct = max_nij_over_frame(members, cpts)
    rep.add("plain_cone.cone_frame_nij", per_direct, cpts, tol)

    lhs_pass = max(plus, minus, max(per_bracket)) < tol
    rhs_pass = direct < tol
    rep.add("plain_cone.verdict_agreement", [0.0 if lhs_pass == rhs_pass else 1.0], None, 0.5)
    return rep


# -- the conjugated-cone integrability condition on M --------------------------------


def _conjugated_cone_rhs(jets, n: int, em_jet) -> complex:
    """2i (<E-,A><B,C>_- + <E-,B><C,A>_- + <E-,C><A,B>_-)."""
    a, b, c = jets
    pm = F.pair_minus_jets
    pe = F.pair_jets
    total = (
        pe(em_jet, a, n).value * pm(b, c, n).value
        + pe(em_jet, b, n).value * pm(c, a, n).value
        + pe(em_jet, c, n).value * pm(a, b, n).value
    )
    return 2j * complex(total)


def conjugated_cone_residual(s: Gacs, base_points, tol: float = INT_TOL,
                             frame: Optional[EigenFrame] = None) -> ResidualReport:
    """|Nij_M(A,B,C) - RHS| over the frame of E^(1,0) + L_{E+} + L_{E-}."""
    if frame is None:
        frame = eigenframe(s)
    members = list(frame.e10) + [frame.eplus, frame.eminus]
    n = s.chart.dim
    triples = list(combinations(range(len(members)), 3))
    rep = ResidualReport()
    per_point = []
    for p in base_points:
        jets = [m.at(p) for m in members]
        em = frame.eminus.at(p)
        worst = 0.0
        for i, j, k in triples:
            lhs = complex(F.nij_jets(jets[i], jets[j], jets[k], n).value)
            rhs = _conjugated_cone_rhs((jets[i], jets[j], jets[k]), n, em)
            worst = max(worst, abs(lhs - rhs))
        per_point.append(worst)
    rep.add("rcone_condition.residual", per_point, base_points, tol)
    return rep


# -- the cone cross-check (R-conjugation bracket identities) ------------------------


def cone_crosscheck(s: Gacs, base_points, tol: float = INT_TOL,
                    frame: Optional[EigenFrame] = None,
                    ts=DEFAULT_TS) -> ResidualReport:
    """Verify the four R-conjugation Nijenhuis identities and the two routes.

    With F+ = R(E+ - i d/dt), F- = R(E- - i dt) and A, B, C running over the
    R-scaled lifted E^(1,0) frame:

      id1  Nij_C(A~, B~, C~)    = e^-t Nij_M(A, B, C)
      id2  Nij_C(A~, B~, F+)    = e^-t (Nij_M(A, B, E+) - i <A, B>_-)
      id3  Nij_C(A~, B~, F-)    = e^-t Nij_M(A, B, E-)
      id4  Nij_C(A~, F+, F-)    = e^-t (Nij_M(A, E+, E-) - i <E-, A>_-)

    The correction terms are i/2 e^-t (beta(X) - alpha(Y)) and
    -i/2 e^-t (eta_-(X) - alpha(xi_-)) in slot notation.  The report also
    carries the per-triple agreement between the direct cone route
    (e^t |Nij_C| over the full conjugated +i frame) and the condition-residual
    route on M, plus the sub-frame involutivity that follows from it.
    """
    if frame is None:
        frame = eigenframe(s)
    n = s.chart.dim
    cone = ConeChart.over(s.chart)
    N = cone.dim
    r = r_endo(cone)
    lifted = [r.apply(m) for m in (lift_section(cone, a) for a in frame.e10)]
    fplus = r.apply(lift_section(cone, s.Eplus) - 1j * ddt_section(cone))
    fminus = r.apply(lift_section(cone, s.Eminus) - 1j * dt_section(cone))
    k = len(lifted)

    rep = ResidualReport()
    cpts = cone_points(base_points, ts)
    rows = {"id1": [], "id2": [], "id3": [], "id4": []}
    agreement = []
    for cp in cpts:
        p, t = cp[:n], cp[n]
        scale = np.exp(-t)
        mjets = [m.at(p) for m in (list(frame.e10) + [s.Eplus, s.Eminus])]
        cjets = [m.at(cp) for m in lifted] + [fplus.at(cp), fminus.at(cp)]
        em = frame.eminus.at(p)
        w1 = w2 = w3 = w4 = agree = 0.0
        for i, jdx in combinations(range(k), 2):
            a, b = mjets[i], mjets[jdx]
            lhs2 = complex(F.nij_jets(cjets[i], cjets[jdx], cjets[k], N).value)
            rhs2 = scale * (
                complex(F.nij_jets(a, b, mjets[k], n).value)
                - 1j * complex(F.pair_minus_jets(a, b, n).value)
            )
            w2 = max(w2, abs(lhs2 - rhs2))
            lhs3 = complex(F.nij_jets(cjets[i], cjets[jdx], cjets[k + 1], N).value)
            rhs3 = scale * complex(F.nij_jets(a, b, mjets[k + 1], n).value)
            w3 = max(w3, abs(lhs3 - rhs3))
        for i, jdx, l in combinations(range(k), 3):
            lhs1 = complex(F.nij_jets(cjets[i], cjets[jdx], cjets[l], N).value)
            rhs1 = scale * complex(F.nij_jets(mjets[i], mjets[jdx], mjets[l], n).value)
            w1 = max(w1, abs(lhs1 - rhs1))
        for i in range(k):
            lhs4 = complex(F.nij_jets(cjets[i], cjets[k], cjets[k + 1], N).value)
            rhs4 = scale * (
                complex(F.nij_jets(mjets[i], mjets[k], mjets[k + 1], n).value)
                - 1j * complex(F.pair_minus_jets(em, mjets[i], n).value)
            )
            w4 = max(w4, abs(lhs4 - rhs4))
        rows["id1"].append(w1)
        rows["id2"].append(w2)
        rows["id3"].append(w3)
        rows["id4"].append(w4)
        # two-route agreement over every frame triple
        full = list(combinations(range(k + 2), 3))
        for tri in full:
            direct = abs(complex(F.nij_jets(*(cjets[i] for i in tri), N).value)) / scale
            lhs = complex(F.nij_jets(*(mjets[i] for i in tri), n).value)
            rhs = _conjugated_cone_rhs(tuple(mjets[i] for i in tri), n, em)
            agree = max(agree, abs(direct - abs(lhs - rhs)))
        agreement.append(agree)
    for name, vals in rows.items():
        rep.add(f"crosscheck.{name}", vals, cpts, tol)
    rep.add("crosscheck.two_route_agreement", agreement, cpts, tol)

    sub, per_sub = max_nij_over_frame(list(frame.e10) + [frame.eminus], base_points)
    thm = conjugated_cone_residual(s, base_points, frame=frame)
    if thm.rows[0].passed:
        rep.add("crosscheck.subframe_nij", per_sub, base_points, tol)
    else:
        rep.add("crosscheck.subframe_nij", per_sub, base_points, None)
    return rep


# -- classical normality and the Sasakian criterion ---------------------------------


def classical_cone_i(acs: AlmostContactMetric, cone: ConeChart) -> MatrixField:
    """I = phi + eta (x) d/dt - dt (x) xi on TC(M)."""
    n = acs.chart.dim

    def fn(p):
        q = p[:n]
        phi = J.extend_vars(acs.phi.at(q), cone.dim)
        xi = J.extend_vars(acs.xi.at(q), cone.dim)
        eta = J.extend_vars(acs.eta.at(q), cone.dim)
        top = F.jconcat([phi, (-xi).reshape(n, 1)], axis=1)
        bot = F.jconcat([eta.reshape(1, n), J.lift(np.zeros((1, 1)), cone.dim)], axis=1)
        return F.jconcat([top, bot], axis=0)

    return MatrixField(cone, fn)


def normality_residual(acs: AlmostContactMetric, base_points, ts=DEFAULT_TS) -> List[float]:
    """Max norm of N(X, Y) = [IX, IY] - I[IX, Y] - I[X, IY] - [X, Y] per point."""
    cone = ConeChart.over(acs.chart)
    imat = classical_cone_i(acs, cone)
    N = cone.dim
    coords = [F.basis_vector(cone, i) for i in range(N)]
    icoords = [imat.apply(v) for v in coords]
    out = []
    cpts = cone_points(base_points, ts)
    for cp in cpts:
        worst = 0.0
        for a, b in combinations(range(N), 2):
            # [X, Y] = 0 for coordinate pairs, so that term drops
            t1 = F.lie_bracket(icoords[a], icoords[b]).at(cp)
            t2 = imat.at(cp)
            br_ab = F.lie_bracket(icoords[a], coords[b]).at(cp)
            br_ba = F.lie_bracket(coords[a], icoords[b]).at(cp)
            val = (
                t1.value
                - t2.value @ br_ab.value
                - t2.value @ br_ba.value
            )
            worst = max(worst, float(np.abs(val).max()))
        out.append(worst)
    return out, cpts


def normality_check(acs: AlmostContactMetric, base_points, tol: float = 1e-8,
                    ts=DEFAULT_TS) -> ResidualReport:
    rep = ResidualReport()
    vals, cpts = normality_residual(acs, base_points, ts)
    rep.add("normality.nijenhuis", vals, cpts, tol)
    return rep


def sasakian_criterion_residual(acs: AlmostContactMetric, points) -> float:
    """max |theta - d eta| over the samples (the pointwise Sasakian criterion)."""
    diff = acs.theta - F.d(acs.eta)
    return max(float(np.abs(diff.values(p)).max()) for p in points)


def sasakian_criterion(acs: AlmostContactMetric, points, tol: float = 1e-8) -> ResidualReport:
    rep = ResidualReport()
    diff = acs.theta - F.d(acs.eta)
    vals = [float(np.abs(diff.values(p)).max()) for p in points]
    rep.add("sasakian.theta_minus_deta", vals, points, tol)
    return rep


# -- the pair conditions for normal structures with a shared metric -------------------


def vaisman_conditions(plus: AlmostContactMetric, minus: AlmostContactMetric,
                       points, tol: float = 1e-8) -> ResidualReport:
    """The three pair conditions: matched Lie derivatives of the fundamental
    forms, the criterion defect, and the twisted-derivative balance."""
    if plus.g is None or minus.g is None:
        raise ValueError("both structures need metrics")
    rep = ResidualReport()
    gdiff = [float(np.abs(plus.g.values(p) - minus.g.values(p)).max()) for p in points]
    rep.add("vaisman.same_metric", gdiff, points, tol)

    th_p, th_m = plus.theta, minus.theta
    l_p = F.lie_derivative(plus.xi, th_p)
    l_m = F.lie_derivative(minus.xi, th_m)
    c1 = l_p + l_m
    rep.add("vaisman.lie_transport", [float(np.abs(c1.values(p)).max()) for p in points], points, tol)

    for tag, acs, th, l1 in (("plus", plus, th_p, l_p), ("minus", minus, th_m, l_m)):
        c2 = th - F.d(acs.eta) + 0.25 * F.lie_derivative(acs.xi, l1)
        rep.add(
            f"vaisman.criterion_defect_{tag}",
            [float(np.abs(c2.values(p)).max()) for p in points],
            points,
            tol,
        )
        dl = F.d(l1)
        c3 = F.d(th) - F.wedge12(acs.eta, l1) - 0.5 * F.c_transform(dl, acs.phi)
        rep.add(
            f"vaisman.derivative_balance_{tag}",
            [float(np.abs(c3.values(p)).max()) for p in points],
            points,
            tol,
        )
    return rep


# -- the generalized Sasakian verdict --------------------------------------------------


def generalized_sasakian_check(m: Gacm, base_points, tol: float = INT_TOL,
                               ts=DEFAULT_TS) -> ResidualReport:
    """Both R-conjugated cone structures of (Phi, E+-) and (G Phi, G E+-) integrable."""
    rep = ResidualReport()
    second = Gacs(m.chart, m.G @ m.Phi, m.G.apply(m.Eplus), m.G.apply(m.Eminus))
    for tag, s in (("phi", m.gacs), ("gphi", second)):
        frame = eigenframe(s)
        rep.extend(conjugated_cone_residual(s, base_points, tol, frame), prefix=f"gsas.{tag}.")
        rep.extend(
            cone_crosscheck(s, base_points, tol, frame, ts), prefix=f"gsas.{tag}."
        )
    return rep
