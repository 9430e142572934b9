import math

import numpy as np
import pytest

from qcext.errors import PreconditionError
from qcext.extensions import (
    ExtendedMap,
    RadialProfile,
    SeamGap,
    _verify_special,
    becker_extend,
    ext_brown,
    ext_exterior,
    ext_huang_owa,
    ext_mobius_convex,
    ext_radial_psi,
    ext_thm2,
    ext_thm5,
    seam_gap,
)
from qcext.loewner import LoewnerChainSpec, build_chain
from qcext.mapexpr import eval_map, parse_map, print_expr
from qcext.sphere import INFINITY, chordal, is_infinity

EX1 = parse_map("z/((1-z)*(1-0.5*z))")
EX2 = parse_map("z/(1+0.5*z^2)")
EX3 = parse_map("z/((1-2*z)*(1-0.25*z))")
KOEBE = parse_map("z/(1-z)^2")
IDENTITY = parse_map("z")
MOBIUS = parse_map("z/(1-0.5*z)")
BROWN_F = parse_map("z-0.25*z^2")
NEG_DERIV = parse_map("-z+0.3*z^2")
G_U = parse_map("z+0.12/z")
G_KRZYZ = parse_map("z+0.5/z")
G_INV = parse_map("z^2/(0.3-z)")


# ---------------------------------------------------------------------------
# disc-side builders


def test_huang_owa_example1_value():
    em = ext_huang_owa(EX1)
    assert abs(em.evaluate(2 + 0j) - (-4.0 / 3.0)) < 1e-12
    assert abs(em.claimed_k - 0.5) < 1e-9


def test_huang_owa_identity_is_global_identity():
    em = ext_huang_owa(IDENTITY)
    for z in (0.3 + 0.1j, 2.0 - 1.0j, 1j):
        assert abs(em.evaluate(z) - z) < 1e-12
    assert em.claimed_k < 1e-12
    assert is_infinity(em.evaluate(INFINITY))


def test_huang_owa_pole_and_infinity_charts():
    em = ext_huang_owa(EX3)
    assert is_infinity(em.evaluate(0.5 + 0j))
    a2 = 2.25
    assert abs(em.evaluate(INFINITY) - (-1.0 / a2)) < 1e-9
    assert any(
        not is_infinity(s) and abs(complex(s) - 0.5) < 1e-9
        for s, _ in em.special_points
    )


def test_huang_owa_rejects_unnormalized():
    with pytest.raises(PreconditionError):
        ext_huang_owa(parse_map("2*z"))


def test_thm2_example2_matches_polar_form():
    em = ext_thm2(EX2)
    rng = np.random.default_rng(3)
    pts = 1.0 + rng.random(32) * 4.0 + 1j * rng.standard_normal(32)
    pts = pts[np.abs(pts) > 1.0]
    got = em.evaluate_array(pts)
    ref = pts / (1.0 + 0.5 * pts / np.conj(pts))
    assert np.max(np.abs(got - ref)) < 1e-10


def test_thm2_rejects_nonzero_a2():
    with pytest.raises(PreconditionError):
        ext_thm2(KOEBE)
    with pytest.raises(PreconditionError):
        ext_thm2(EX1)


def test_thm2_identity():
    em = ext_thm2(IDENTITY)
    assert abs(em.evaluate(5 - 2j) - (5 - 2j)) < 1e-12
    assert em.claimed_k < 1e-12


def test_mobius_convex_example():
    em = ext_mobius_convex(0.5)
    assert abs(em.evaluate(2.0 + 0j) - 6.0) < 1e-12
    assert em.claimed_k == 0.5
    assert abs(em.evaluate(0.5 + 0j) - eval_map(MOBIUS, 0.5)) < 1e-12


def test_mobius_convex_rejects_bad_a2():
    for a2 in (0.0, 1.0, 1.5, -2.0):
        with pytest.raises(PreconditionError):
            ext_mobius_convex(a2)


def test_radial_unimodular_example():
    em = ext_radial_psi("unimodular_a2", 1.0, RadialProfile(2.0))
    # psi(2) = 3: outer = 3/(1-3)
    assert abs(em.evaluate(2.0 + 0j) - (-1.5)) < 1e-12
    assert is_infinity(em.evaluate(1.0 + 0j))
    assert abs(em.evaluate(INFINITY) - (-1.0)) < 1e-9


def test_radial_vp_example():
    em = ext_radial_psi("vp_pole", 0.5, RadialProfile(2.0))
    assert abs(em.claimed_k - 0.6) < 1e-12
    assert is_infinity(em.evaluate(0.5 + 0j))
    assert abs(em.evaluate(INFINITY) - (-0.5)) < 1e-9


def test_radial_validation():
    with pytest.raises(ValueError):
        RadialProfile(1.0)
    with pytest.raises(PreconditionError):
        ext_radial_psi("unimodular_a2", 0.5, RadialProfile(2.0))
    with pytest.raises(PreconditionError):
        ext_radial_psi("vp_pole", 1.5, RadialProfile(2.0))
    with pytest.raises(ValueError):
        ext_radial_psi("sideways", 0.5, RadialProfile(2.0))


def test_radial_profile_shape():
    prof = RadialProfile(3.0)
    assert prof.psi(1.0) == 1.0
    r = np.linspace(1.0, 4.0, 7)
    assert np.all(np.diff(prof.psi(r)) > 0)
    assert np.all(prof.psi_prime(r) == 3.0)


def test_brown_example():
    em = ext_brown(BROWN_F, 1.0)
    f_half = eval_map(BROWN_F, 0.5)
    assert abs(em.evaluate(2.0 + 0j) - (f_half + 1.5)) < 1e-12
    assert abs(em.claimed_k - 0.5) < 1e-9


def test_brown_identity_lambda_one():
    em = ext_brown(IDENTITY, 1.0)
    assert abs(em.evaluate(3 + 2j) - (3 + 2j)) < 1e-12
    assert em.claimed_k < 1e-12


def test_brown_rejects_zero_lambda():
    with pytest.raises(PreconditionError):
        ext_brown(BROWN_F, 0.0)


def test_thm5_examples():
    em = ext_thm5(NEG_DERIV)
    assert abs(em.evaluate(2.0 + 0j) - (-1.925)) < 1e-12
    assert abs(em.claimed_k - 0.6) < 1e-9
    neg = ext_thm5(parse_map("-z"))
    for z in (0.4 + 0.1j, 3 - 1j):
        assert abs(neg.evaluate(z) - (-z)) < 1e-12


# ---------------------------------------------------------------------------
# exterior builders


def test_exterior_thm4_identity():
    em = ext_exterior(IDENTITY, "thm4")
    for z in (0.5 + 0j, 0.3 - 0.2j, 2 + 1j):
        assert abs(em.evaluate(z) - z) < 1e-12


def test_exterior_cor1_value():
    em = ext_exterior(IDENTITY, "cor1")
    assert abs(em.evaluate(0.5 + 0j) - (-1.0)) < 1e-12


def test_exterior_krzyz_value_and_w():
    em = ext_exterior(G_KRZYZ, "krzyz")
    assert abs(em.evaluate(0.5j) - 0.25j) < 1e-12
    w_src = dict(em.outer_params)["w"]
    w = parse_map(w_src)
    for z in (0.3, -0.7j, 0.2 + 0.2j):
        assert abs(eval_map(w, z) - 0.5 * z) < 1e-12


def test_exterior_krzyz_decay_routes_through():
    em = ext_exterior(G_U, "krzyz_decay")
    assert abs(em.claimed_k - 0.12) < 1e-9
    assert em.outer_id == "conjugate_shift"


def test_exterior_warns_on_shifted_w():
    with pytest.warns(UserWarning):
        ext_exterior(parse_map("z+1+0.3/z"), "krzyz")


def test_exterior_cor1_accepts_unimodular_lead():
    with pytest.warns(UserWarning):
        em = ext_exterior(G_INV, "cor1")
    assert abs(em.claimed_k - 0.6) < 1e-3


def test_exterior_rejects_bad_normalization():
    with pytest.raises(PreconditionError):
        ext_exterior(parse_map("2*z+0.1/z"), "thm4")
    with pytest.raises(PreconditionError):
        ext_exterior(G_INV, "thm4")
    with pytest.raises(PreconditionError):
        ext_exterior(parse_map("z^2"), "krzyz")
    with pytest.raises(ValueError):
        ext_exterior(G_U, "elsewhere")


def test_exterior_analytic_branch_is_g():
    em = ext_exterior(G_U, "thm4")
    assert em.inner_region == "exterior"
    assert abs(em.evaluate(2.0 + 0j) - eval_map(G_U, 2.0)) < 1e-15
    assert is_infinity(em.evaluate(INFINITY))


# ---------------------------------------------------------------------------
# seams and special points


@pytest.fixture(scope="module")
def built_corpus():
    return {
        "huang_owa_ex3": ext_huang_owa(EX3),
        "thm2_ex2": ext_thm2(EX2),
        "mobius": ext_mobius_convex(0.5),
        "radial_vp": ext_radial_psi("vp_pole", 0.5, RadialProfile(2.0)),
        "brown": ext_brown(BROWN_F, 1.0),
        "thm5": ext_thm5(NEG_DERIV),
        "thm4": ext_exterior(G_U, "thm4"),
        "krzyz": ext_exterior(G_KRZYZ, "krzyz"),
    }


def test_seam_gap_tight_everywhere(built_corpus):
    for name, em in built_corpus.items():
        gap = seam_gap(em, n=1024)
        assert gap.sup_chordal <= 1e-9, (name, gap)
        assert gap.sup_abs <= 1e-9, (name, gap)
        assert gap.sup_offset < 1e-2, (name, gap)
        assert gap.n_samples == 1024


def test_seam_gap_boundary_pole_chordal():
    # branch values blow up together near the seam pole of example 1
    em = ext_huang_owa(EX1)
    gap = seam_gap(em)
    assert gap.sup_chordal <= 1e-9
    assert math.isfinite(gap.sup_abs)


def test_evaluate_array_matches_scalar(built_corpus):
    rng = np.random.default_rng(11)
    pts = rng.standard_normal(64) * 0.9 + 1j * rng.standard_normal(64) * 0.9
    pts = np.concatenate([pts, 1.0 / pts[np.abs(pts) > 0.2]])
    for name, em in built_corpus.items():
        arr = em.evaluate_array(pts)
        for z, v in zip(pts, arr):
            want = em.evaluate(complex(z))
            if is_infinity(want):
                assert not np.isfinite(v) or abs(v) > 1e12, name
            else:
                assert chordal(complex(v), want) < 1e-9, (name, z)


def test_special_point_verification_catches_lies():
    good = ext_mobius_convex(0.5)
    bogus = ExtendedMap(
        inner=good.inner,
        inner_region="disc",
        outer_id=good.outer_id,
        outer_params=good.outer_params,
        outer=good.outer,
        special_points=((0.25 + 0j, INFINITY),),
        claimed_k=good.claimed_k,
    )
    with pytest.raises(ArithmeticError):
        _verify_special(bogus)


def test_summary_shape(built_corpus):
    em = built_corpus["thm2_ex2"]
    s = em.summary()
    assert s["inner"] == print_expr(EX2.root)
    assert s["outer"]["id"] == "map_reflection"
    assert ["infinity", "infinity"] in s["special_points"]
    r = built_corpus["radial_vp"].summary()
    assert r["outer"]["params"]["M"] == "2.0"
    assert [[0.5, 0.0], "infinity"] in r["special_points"]


def test_evaluate_requires_chart():
    em = ext_mobius_convex(0.5)
    stripped = ExtendedMap(
        inner=em.inner,
        inner_region="disc",
        outer_id=em.outer_id,
        outer_params=em.outer_params,
        outer=em.outer,
        special_points=(),
        claimed_k=em.claimed_k,
    )
    with pytest.raises(PreconditionError):
        stripped.evaluate(INFINITY)


# ---------------------------------------------------------------------------
# chain-driven extension


def test_becker_reproduces_convex_closed_form():
    em_chain = becker_extend(build_chain("convex_chain", MOBIUS))
    em_closed = ext_mobius_convex(0.5)
    rng = np.random.default_rng(5)
    Z = (1.05 + rng.random(40) * 3.0) * np.exp(2j * np.pi * rng.random(40))
    assert np.max(np.abs(em_chain.evaluate_array(Z) - em_closed.evaluate_array(Z))) < 1e-10


def test_becker_reproduces_thm2_closed_form():
    em_chain = becker_extend(build_chain("thm2_eq3", EX2))
    em_closed = ext_thm2(EX2)
    rng = np.random.default_rng(6)
    Z = (1.01 + rng.random(40) * 5.0) * np.exp(2j * np.pi * rng.random(40))
    assert np.max(np.abs(em_chain.evaluate_array(Z) - em_closed.evaluate_array(Z))) < 1e-10


def test_becker_reproduces_krzyz_by_inversion():
    em_chain = becker_extend(build_chain("krzyz_eq9", parse_map("0.5*z")))
    em_closed = ext_exterior(G_KRZYZ, "krzyz")
    rng = np.random.default_rng(7)
    zeta = (0.1 + rng.random(40) * 0.85) * np.exp(2j * np.pi * rng.random(40))
    F = em_chain.evaluate_array(1.0 / zeta)
    G = 1.0 / F
    ref = em_closed.evaluate_array(zeta)
    assert np.max(np.abs(G - ref)) < 1e-10


def test_becker_rejects_failing_chain():
    bad = LoewnerChainSpec("thm5_chain", IDENTITY, 1.0 + 0j, 2.0)
    with pytest.raises(PreconditionError):
        becker_extend(bad)


def test_becker_skip_validation_still_builds():
    bad = LoewnerChainSpec("thm5_chain", IDENTITY, 1.0 + 0j, 2.0)
    em = becker_extend(bad, validate=False)
    assert em.outer_id == "chain_radial"
