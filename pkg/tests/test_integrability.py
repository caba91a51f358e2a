"""Involutivity, the conjugated-cone condition residuals, the cone
cross-check, normality, the pair conditions and the Sasakian criteria."""

import numpy as np
import pytest

from gencontact import fields as F
from gencontact import gallery
from gencontact import integrability as I
from gencontact import structures as S

DARBOUX = gallery.build("darboux")
HEIS = gallery.build("heisenberg_sasakian")
HEIS_CK = gallery.build("heisenberg_cone_kahler")
KAHLER = gallery.build("kahler_interval")


def pts(entry, n=6, seed=37):
    return entry["chart"].sample(seed=seed, count=n)


def test_plain_cone_heisenberg_strong():
    rep = I.plain_cone_check(HEIS["gacs"], pts(HEIS))
    assert rep.passed
    assert rep.max_residual < 1e-8


def test_plain_cone_darboux_verdicts_agree():
    rep = I.plain_cone_check(DARBOUX["gacs"], pts(DARBOUX))
    assert rep["plain_cone.verdict_agreement"].max_residual == 0.0
    # L+ fails, so the direct cone frame fails too
    assert rep["plain_cone.l_plus_nij"].max_residual > 1e-3
    assert rep["plain_cone.cone_frame_nij"].max_residual > 1e-3
    assert rep["plain_cone.e_plus_minus_bracket"].max_residual < 1e-10


def test_plain_cone_perturbed_fails_both_routes():
    ch = DARBOUX["chart"]
    wild = F.wedge11(F.coordinate(ch, 2) * F.basis_form(ch, 0), F.basis_form(ch, 1))
    twisted = S.b_transform(DARBOUX["gacs"], wild)
    rep = I.plain_cone_check(twisted, pts(DARBOUX, 4))
    assert rep["plain_cone.verdict_agreement"].max_residual == 0.0
    assert rep["plain_cone.l_minus_nij"].max_residual > 1e-3
    assert rep["plain_cone.cone_frame_nij"].max_residual > 1e-3


def test_conjugated_cone_rhs_vanishes_on_pure_e10_triples():
    """<E-, A> = 0 for frame members orthogonal to E+-, so the RHS drops."""
    frame = S.eigenframe(KAHLER["gacm"].gacs)
    n = 3
    for p in pts(KAHLER, 4):
        em = frame.eminus.at(p)
        for a in frame.e10:
            val = F.pair_jets(em, a.at(p), n).value
            assert abs(val) < 1e-12


def test_rcone_condition_gallery_values():
    assert I.conjugated_cone_residual(HEIS["gacs"], pts(HEIS)).max_residual < 1e-7
    assert I.conjugated_cone_residual(KAHLER["gacm"].gacs, pts(KAHLER)).max_residual < 1e-7
    # Darboux's bivector lift is not normal; with the frame normalisation
    # (members are halves of e1 - i dy etc.) the residual per triple is
    # |Nij - RHS| = |(-1/2) - (-1)| / 4 = 1/8, straight from the brackets
    # [[A1, A2]] = -d/dz, [[A2, E+]] = -dx, [[E+, A1]] = -dy
    rep = I.conjugated_cone_residual(DARBOUX["gacs"], pts(DARBOUX))
    assert rep.max_residual == pytest.approx(0.125, abs=1e-9)


def test_crosscheck_identities_and_agreement():
    for entry in (DARBOUX, HEIS, KAHLER):
        s = entry.get("gacs") or entry["gacm"].gacs
        rep = I.cone_crosscheck(s, pts(entry, 5))
        for name in ("id1", "id2", "id3", "id4", "two_route_agreement"):
            assert rep[f"crosscheck.{name}"].max_residual < 1e-8, (entry, name)


def test_crosscheck_subframe_involutivity():
    rep = I.cone_crosscheck(HEIS["gacs"], pts(HEIS, 5))
    row = rep["crosscheck.subframe_nij"]
    assert row.tolerance is not None and row.passed


def test_normality():
    assert I.normality_check(HEIS["acs"], pts(HEIS)).passed
    for acs in KAHLER["acs_pair"]:
        assert I.normality_check(acs, pts(KAHLER, 4)).passed
    # perturbing phi by 0.1 dx (x) d/dy destroys normality
    ch = HEIS["chart"]
    bump = F.matrix_field(
        ch,
        [[F.constant(ch, 0)] * 3,
         [F.constant(ch, 0.1), F.constant(ch, 0), F.constant(ch, 0)],
         [F.constant(ch, 0)] * 3],
    )
    perturbed = S.AlmostContactMetric(ch, HEIS["acs"].phi + bump, HEIS["acs"].xi,
                                      HEIS["acs"].eta, HEIS["acs"].g)
    rep = I.normality_check(perturbed, pts(HEIS, 4))
    assert rep.max_residual > 1e-3


def test_normality_sign_flip_invariance():
    for acs in KAHLER["acs_pair"]:
        flipped = acs.flipped()
        a = I.normality_check(acs, pts(KAHLER, 3)).max_residual
        b = I.normality_check(flipped, pts(KAHLER, 3)).max_residual
        assert (a < 1e-8) == (b < 1e-8)


def test_sasakian_criterion():
    assert I.sasakian_criterion_residual(HEIS["acs"], pts(HEIS)) < 1e-9
    # the warped interval: theta = sin(2z) omega', d eta = 0
    p = np.array([0.2, -0.3, np.pi / 4])
    acs = KAHLER["acs_pair"][0]
    diff = acs.theta - F.d(acs.eta)
    assert np.abs(diff.values(p)).max() == pytest.approx(1.0, abs=1e-12)
    assert I.sasakian_criterion_residual(acs, pts(KAHLER)) > 0.5


def test_vaisman_conditions_pairs():
    rep = I.vaisman_conditions(HEIS["acs"], HEIS["acs"], pts(HEIS))
    assert rep.passed and rep.max_residual < 1e-8
    plus, minus = KAHLER["acs_pair"]
    rep2 = I.vaisman_conditions(plus, minus, pts(KAHLER))
    assert rep2.passed and rep2.max_residual < 1e-8


def test_vaisman_detuned_pair_violates_criterion_defect():
    ch = HEIS["chart"]
    acs = HEIS["acs"]
    detuned = S.AlmostContactMetric(ch, acs.phi, acs.xi, 2 * acs.eta, acs.g)
    rep = I.vaisman_conditions(acs, detuned, pts(HEIS, 4))
    assert rep["vaisman.criterion_defect_minus"].max_residual > 1e-2


def test_vaisman_requires_metric():
    bare = S.AlmostContactMetric(HEIS["chart"], HEIS["acs"].phi, HEIS["acs"].xi,
                                 HEIS["acs"].eta, None)
    with pytest.raises(ValueError, match="metric"):
        I.vaisman_conditions(bare, bare, pts(HEIS, 2))


def test_generalized_sasakian_kahler_interval():
    rep = I.generalized_sasakian_check(KAHLER["gacm"], pts(KAHLER, 5))
    assert rep.passed and rep.max_residual < 1e-7


def test_generalized_sasakian_cone_kahler_heisenberg():
    """The metric lift of a cone-Kaehler Sasakian structure passes both branches."""
    rep = I.generalized_sasakian_check(HEIS_CK["gacm"], pts(HEIS_CK, 5))
    assert rep.passed and rep.max_residual < 1e-7


def test_generalized_sasakian_needs_cone_kahler_normalisation():
    """With theta = d eta (determinant convention) the companion branch fails:
    closure of the cone 2-form needs 2 theta = d eta."""
    rep = I.generalized_sasakian_check(HEIS["gacm"], pts(HEIS, 4))
    assert rep["gsas.phi.rcone_condition.residual"].max_residual < 1e-8
    assert rep["gsas.gphi.rcone_condition.residual"].max_residual > 1e-2
    # the proof identities hold regardless: only the verdict differs
    assert rep["gsas.gphi.crosscheck.two_route_agreement"].max_residual < 1e-8


def test_generalized_sasakian_detuned_metric_fails():
    """Replacing the sin(2z) metric factor by 1 breaks the compatibility."""
    import gencontact.jets as JT

    ch = KAHLER["chart"]
    zero, one = F.constant(ch, 0), F.constant(ch, 1)
    z = F.coordinate(ch, 2)
    c2z = F.ScalarField(ch, lambda p: JT.cos(2 * z.at(p)))
    g1 = F.matrix_field(ch, [[one, zero, zero], [zero, one, zero], [zero, zero, one]])
    omega_prime = F.wedge11(F.basis_form(ch, 0), F.basis_form(ch, 1))
    metric = S.gmetric_from_gb(g1, -1 * (c2z * omega_prime))
    detuned = S.Gacm(KAHLER["gacm"].gacs, metric)
    assert not S.gacm_check(detuned, pts(KAHLER, 4)).passed
    rep = I.generalized_sasakian_check(detuned, pts(KAHLER, 3))
    assert rep.max_residual > 1e-3


def test_residuals_invariant_under_pivot_shuffle():
    """Verdicts do not depend on which independent columns the frame keeps."""
    for entry in (DARBOUX, HEIS):
        s = entry["gacs"]
        base = s.chart.sample(seed=0, count=1)[0]
        candidates = [
            S._eigen_project(s, S._project_out_kernel(s, u))
            for u in F.coordinate_sections(s.chart)
        ]
        mat = np.stack([c.values(base) for c in candidates], axis=1)
        default = S._pivot_columns(mat, 2)
        shuffled = S._pivot_columns(mat[:, ::-1], 2)
        alt_cols = sorted(len(candidates) - 1 - c for c in shuffled)
        assert alt_cols != default  # genuinely different column choice
        sample = pts(entry, 4)
        verdicts = []
        for cols in (default, alt_cols):
            frame = S.EigenFrame(
                e10=tuple(candidates[i] for i in cols),
                eplus=s.Eplus,
                eminus=s.Eminus,
                pivots=tuple(cols),
            )
            res = I.conjugated_cone_residual(s, sample, frame=frame).max_residual
            verdicts.append(res < 1e-7)
            label, _ = S.involutivity_class(s, sample, frame=frame)
            verdicts.append(label)
        assert verdicts[0] == verdicts[2] and verdicts[1] == verdicts[3]


def test_five_dimensional_darboux_full_stack():
    """dim 5 exercises the identity on pure eigenframe triples (id1), which
    needs at least three frame members and so never fires on 3-charts."""
    from gencontact import cone as C
    from gencontact import gallery as G

    d2 = G.darboux(2)
    ch = d2["chart"]
    sample = ch.sample(seed=3, count=3)
    assert S.gacs_check(d2["gacs"], sample).passed
    frame = S.eigenframe(d2["gacs"], sample_points=sample)
    assert len(frame.e10) == 4  # (2n - 2)/2 with n = 5
    label, _ = S.involutivity_class(d2["gacs"], sample)
    assert label == "contact(-)"
    out = C.cone_decompose(C.cone_gacx(d2["gacs"]))
    assert np.abs(out.Phi.values(sample[0]) - d2["gacs"].Phi.values(sample[0])).max() < 1e-10
    rep = I.cone_crosscheck(d2["gacs"], sample, ts=(-0.4, 0.3))
    assert rep["crosscheck.id1"].max_residual < 1e-8
    assert rep["crosscheck.two_route_agreement"].max_residual < 1e-8
