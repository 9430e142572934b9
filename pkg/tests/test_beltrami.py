import math

import numpy as np
import pytest

from qcext.beltrami import (
    DegenerateFieldError,
    FieldGrid,
    TAU_MU,
    VerificationVerdict,
    beltrami_field,
    certify_qc,
    infinity_chart_field,
    injectivity_floor,
    wirtinger,
)
from qcext.errors import PreconditionError
from qcext.extensions import (
    ExtendedMap,
    RadialProfile,
    ext_exterior,
    ext_huang_owa,
    ext_mobius_convex,
    ext_radial_psi,
    ext_thm2,
    seam_gap,
)
from qcext.mapexpr import eval_array, parse_map

EX1 = parse_map("z/((1-z)*(1-0.5*z))")
EX2 = parse_map("z/(1+0.5*z^2)")
KOEBE = parse_map("z/(1-z)^2")
IDENTITY = parse_map("z")
G_KRZYZ = parse_map("z+0.5/z")


# ---------------------------------------------------------------------------
# stencil


def test_wirtinger_conjugate():
    fz, fzb = wirtinger(np.conj, 0.4 + 0.2j, 1e-5)
    assert abs(fz) < 1e-9
    assert abs(fzb - 1) < 1e-9


def test_wirtinger_square():
    fz, fzb = wirtinger(lambda z: z * z, 1 + 1j, 1e-5)
    assert abs(fz - (2 + 2j)) < 1e-9
    assert abs(fzb) < 1e-12


def test_wirtinger_on_extension_interior_branch():
    em = ext_exterior(G_KRZYZ, "krzyz")
    fz, fzb = wirtinger(em.evaluate_array, 0.3 + 0j, 1e-5)
    # piecewise-linear branch, so the stencil is exact
    assert abs(fz - 1.0) < 1e-10
    assert abs(fzb - 0.5) < 1e-10


def test_wirtinger_respects_exclusions():
    with pytest.raises(PreconditionError):
        wirtinger(np.conj, 0.5 + 0j, 1e-5, exclusions=[(0.5 + 1e-5j, 1e-6)])


def test_wirtinger_order_at_least_1_9():
    # holomorphic samples: the true zbar-derivative is 0, so the stencil
    # error itself is the observable
    pts = (0.3 + 0.2j, -0.1 + 0.45j, 0.5 - 0.3j)
    for f in (KOEBE, EX1):
        for z in pts:
            errs = []
            for h in (1e-3, 1e-4):
                _, fzb = wirtinger(lambda w, f=f: eval_array(f, w), z, h)
                errs.append(abs(fzb))
            order = math.log10(errs[0] / errs[1])
            assert order >= 1.9, (f, z, errs)


# ---------------------------------------------------------------------------
# grids


def test_grid_rejects_bad_region():
    with pytest.raises(ValueError):
        FieldGrid("torus")


def test_grid_rejects_budget_blowout():
    with pytest.raises(ValueError):
        FieldGrid("sphere", 1 << 12, 1 << 12)


def test_grid_rejects_unordered_bounds():
    with pytest.raises(ValueError):
        FieldGrid("disc", r_bounds=(0.9, 0.1))


def test_grid_points_avoid_seam():
    r_in = np.abs(FieldGrid("disc", 8, 8).points())
    r_out = np.abs(FieldGrid("exterior_annulus", 8, 8).points())
    assert r_in.max() <= 1.0 - 1e-4 + 1e-15
    assert r_out.min() >= 1.0 + 1e-4 - 1e-15
    r_both = np.abs(FieldGrid("sphere", 8, 8).points())
    assert not np.any((r_both > 1.0 - 1e-4 + 1e-15) & (r_both < 1.0 + 1e-4 - 1e-15))


def test_grid_exclusions_punch_holes():
    em = ext_mobius_convex(0.5)
    grid = FieldGrid("disc", 16, 16, exclusions=((0.5 + 0j, 0.3),))
    field = beltrami_field(em, grid)
    assert np.all(np.abs(field.points - 0.5) >= 0.3)


# ---------------------------------------------------------------------------
# fields


def test_identity_field_is_flat():
    em = ext_huang_owa(IDENTITY)
    field = beltrami_field(em, FieldGrid("sphere", 24, 24))
    assert field.sup_mu <= 1e-9
    assert field.degenerate_count == 0
    assert np.all(field.jacobian_proxy > 0)


def test_krzyz_field_constant_half():
    em = ext_exterior(G_KRZYZ, "krzyz")
    inner = beltrami_field(em, FieldGrid("disc", 24, 24))
    assert np.max(np.abs(np.abs(inner.mu) - 0.5)) < 1e-6
    outer = beltrami_field(em, FieldGrid("exterior_annulus", 24, 24))
    assert outer.sup_mu < 1e-6
    assert abs(beltrami_field(em).sup_mu - 0.5) < 1e-6


def test_radial_field_matches_profile_law():
    em = ext_radial_psi("unimodular_a2", 1.0 + 0j, RadialProfile(2.0))
    grid = FieldGrid("exterior_annulus", 20, 24, r_bounds=(1.01, 2.5))
    field = beltrami_field(em, grid)
    r = np.abs(field.points)
    law = 1.0 / (4.0 * r - 1.0)
    assert np.max(np.abs(np.abs(field.mu) - law)) < 1e-5
    assert field.sup_mu <= em.claimed_k + TAU_MU


def test_degenerate_field_rejected():
    em = ExtendedMap(
        inner=parse_map("z-z"),
        inner_region="disc",
        outer_id="flat",
        outer_params=(),
        outer=lambda Z: np.zeros_like(Z),
        special_points=(),
        claimed_k=0.0,
    )
    with pytest.raises(DegenerateFieldError):
        beltrami_field(em, FieldGrid("disc", 8, 8))


def test_field_summary_shape():
    s = beltrami_field(ext_mobius_convex(0.5), FieldGrid("disc", 8, 8)).summary()
    assert set(s) == {"sup_mu", "argmax_point", "degenerate_count", "n_points", "mesh"}
    assert s["mesh"] == "8x8 disc"


def test_threaded_field_is_bitwise_deterministic(monkeypatch):
    em = ext_thm2(EX2)
    grid = FieldGrid("sphere", 16, 16)
    monkeypatch.setenv("QCX_THREADS", "1")
    one = beltrami_field(em, grid)
    monkeypatch.setenv("QCX_THREADS", "4")
    four = beltrami_field(em, grid)
    assert np.array_equal(one.mu, four.mu)
    assert np.array_equal(one.jacobian_proxy, four.jacobian_proxy)
    assert one.sup_mu == four.sup_mu and one.argmax_point == four.argmax_point


# ---------------------------------------------------------------------------
# infinity chart


def test_chart_field_when_infinity_fixed():
    chart = infinity_chart_field(ext_thm2(EX2))
    assert chart.sup_mu <= 0.5 + TAU_MU
    assert np.all(chart.jacobian_proxy[np.isfinite(chart.jacobian_proxy)] > 0)


def test_chart_field_when_infinity_moves():
    chart = infinity_chart_field(ext_huang_owa(EX1))
    assert chart.sup_mu <= 0.5 + TAU_MU


# ---------------------------------------------------------------------------
# certification


@pytest.mark.parametrize(
    "em",
    [
        ext_thm2(EX2),
        ext_mobius_convex(0.5),
        ext_exterior(G_KRZYZ, "krzyz"),
        ext_radial_psi("unimodular_a2", 1.0 + 0j, RadialProfile(2.0)),
    ],
    ids=["thm2", "mobius", "krzyz", "radial"],
)
def test_certify_corpus_extension_passes(em):
    verdict = certify_qc(em, grid=FieldGrid("sphere", 48, 48))
    assert verdict.passed
    assert verdict.mu_ok and verdict.orientation_ok and verdict.seam_ok
    assert verdict.sup_mu <= verdict.claimed_k + TAU_MU
    assert verdict.jacobian_min > 0


def test_certify_koebe_reflection_blows_past_09():
    # not a class member; the reflection formula degrades at the seam
    em = ext_huang_owa(KOEBE)
    grid = FieldGrid("exterior_annulus", 64, 64, r_bounds=(1.001, 1.01))
    field = beltrami_field(em, grid)
    assert field.sup_mu > 0.9
    verdict = certify_qc(em, claimed_k=0.9, grid=grid)
    assert not verdict.mu_ok and not verdict.passed


def test_certify_flags_injected_seam_fault():
    base = ext_thm2(EX2)
    fault = ExtendedMap(
        inner=EX2,
        inner_region="disc",
        outer_id="fault",
        outer_params=(),
        outer=lambda Z: base.outer(Z) + 0.1,
        special_points=base.special_points,
        claimed_k=base.claimed_k,
    )
    gap = seam_gap(fault)
    assert abs(gap.sup_abs - 0.1) < 1e-6
    verdict = certify_qc(fault, grid=FieldGrid("sphere", 16, 16))
    assert not verdict.seam_ok and not verdict.passed
    assert verdict.mu_ok  # the shift leaves derivatives alone


def test_verdict_summary_shape():
    s = certify_qc(ext_mobius_convex(0.5), grid=FieldGrid("sphere", 16, 16)).summary()
    assert s["passed"] is True
    for key in ("sup_mu", "claimed_k", "jacobian_min", "seam_sup_chordal", "n_points"):
        assert key in s


# ---------------------------------------------------------------------------
# injectivity sampling


@pytest.mark.parametrize(
    "em",
    [ext_thm2(EX2), ext_mobius_convex(0.5), ext_exterior(G_KRZYZ, "krzyz")],
    ids=["thm2", "mobius", "krzyz"],
)
def test_injectivity_floor_positive(em):
    c = injectivity_floor(em, n_pairs=10_000, seed=7)
    assert c > 1e-9
