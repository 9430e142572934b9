import numpy as np
import pytest

from qcext.mapexpr import eval_array, parse_map
from qcext.render import (
    CIRCLE_COLOR,
    RAY_COLOR,
    ppm_bytes,
    render_domaincolor,
    render_grid_image,
    render_map,
)

KOEBE = parse_map("z/(1-z)^2")


def _fn(m):
    return lambda Z: eval_array(m, Z)


def test_ppm_header_and_size():
    rgb = np.zeros((16, 16, 3), dtype=np.uint8)
    data = ppm_bytes(rgb)
    assert data.startswith(b"P6\n16 16\n255\n")
    assert len(data) == len(b"P6\n16 16\n255\n") + 768


def test_resolution_cap():
    with pytest.raises(ValueError):
        render_domaincolor(_fn(KOEBE), resolution=5000)
    with pytest.raises(ValueError):
        render_map(_fn(KOEBE), "watercolor", 32)


def test_determinism():
    a = render_domaincolor(_fn(KOEBE), 64)
    b = render_domaincolor(_fn(KOEBE), 64)
    assert np.array_equal(a, b)
    c = render_grid_image(_fn(KOEBE), 64)
    d = render_grid_image(_fn(KOEBE), 64)
    assert np.array_equal(c, d)


def test_identity_grid_draws_circles_and_rays():
    img = render_grid_image(_fn(parse_map("z")), 128)
    flat = img.reshape(-1, 3)
    assert np.any(np.all(flat == CIRCLE_COLOR, axis=1))
    assert np.any(np.all(flat == RAY_COLOR, axis=1))
    # background still dominates
    assert np.mean(np.all(flat == (245, 245, 245), axis=1)) > 0.5


def test_koebe_domaincolor_structure():
    img = render_domaincolor(_fn(KOEBE), 256, window=2.0)
    # -0.5 maps onto the omitted ray's side: negative real value, cyan hue
    col = int((-0.5 + 2.0) / 4.0 * 256)
    px = img[127, col].astype(int)
    assert px[2] > px[0] and px[1] > px[0]
    # log-modulus banding produces a rich palette
    assert len(np.unique(img.reshape(-1, 3), axis=0)) > 100


def test_nonfinite_pixels_are_white():
    img = render_domaincolor(_fn(parse_map("1/(z-1)")), 64, window=2.0)
    # the pole sits inside the window; its pixel neighborhood saturates
    assert img.max() == 255
