"""Static raster output: domain coloring and polar-grid images as binary PPM.

PPM (P6, 8-bit, no comment lines) keeps goldens bit-exact with zero image
dependencies.  All pixel math is vectorized and deterministic for fixed
inputs; file writes happen in one shot at the end.
"""

from __future__ import annotations

import numpy as np

MAX_RESOLUTION = 4096

STYLE_NAMES = ("grid", "domaincolor")

BACKGROUND = (245, 245, 245)
CIRCLE_COLOR = (40, 40, 160)
RAY_COLOR = (170, 40, 40)


def ppm_bytes(rgb: np.ndarray) -> bytes:
    rgb = np.ascontiguousarray(rgb, dtype=np.uint8)
    if rgb.ndim != 3 or rgb.shape[2] != 3:
        raise ValueError("expected an (H, W, 3) pixel array")
    h, w = rgb.shape[:2]
    return b"P6\n%d %d\n255\n" % (w, h) + rgb.tobytes()


def write_ppm(path: str, rgb: np.ndarray) -> None:
    data = ppm_bytes(rgb)
    with open(path, "wb") as fh:
        fh.write(data)


def _hsv_to_rgb(h: np.ndarray, s: np.ndarray, v: np.ndarray) -> np.ndarray:
    h = np.mod(h, 1.0) * 6.0
    i = np.floor(h).astype(int) % 6
    f = h - np.floor(h)
    p = v * (1.0 - s)
    q = v * (1.0 - s * f)
    t = v * (1.0 - s * (1.0 - f))
    r = np.choose(i, [v, q, p, p, t, v])
    g = np.choose(i, [t, v, v, q, p, p])
    b = np.choose(i, [p, p, t, v, v, q])
    return np.stack([r, g, b], axis=-1)


def _pixel_window(resolution: int, window: float):
    if not 1 <= resolution <= MAX_RESOLUTION:
        raise ValueError(f"resolution must lie in [1, {MAX_RESOLUTION}]")
    xs = (np.arange(resolution) + 0.5) / resolution * 2.0 * window - window
    # rows run top-down
    Z = xs[None, :] + 1j * (-xs[:, None])
    return Z


def render_domaincolor(fn, resolution: int = 512, window: float = 2.5) -> np.ndarray:
    """Hue = argument, brightness banded by log-modulus; zeros dark, poles
    and nonfinite values white."""
    Z = _pixel_window(resolution, window)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        W = np.asarray(fn(Z), dtype=np.complex128)
        hue = np.angle(W) / (2.0 * np.pi)
        mag = np.abs(W)
        band = np.zeros_like(mag)
        pos = np.isfinite(mag) & (mag > 0)
        band[pos] = np.log2(mag[pos]) - np.floor(np.log2(mag[pos]))
        val = 0.55 + 0.45 * band
        sat = np.where(np.isfinite(mag), 0.9, 0.0)
        tiny = mag < 1e-8
        val = np.where(tiny, 0.05, val)
        huge = ~np.isfinite(mag) | (mag > 1e8)
        val = np.where(huge, 1.0, val)
        sat = np.where(huge | tiny, 0.0, sat)
        hue = np.where(np.isfinite(hue), hue, 0.0)
    rgb = _hsv_to_rgb(hue, sat, val)
    return np.clip(np.rint(rgb * 255.0), 0, 255).astype(np.uint8)


def _paint(buf: np.ndarray, w: np.ndarray, window: float, color) -> None:
    res = buf.shape[0]
    ok = np.isfinite(w) & (np.abs(w.real) < window) & (np.abs(w.imag) < window)
    w = w[ok]
    cols = np.floor((w.real + window) / (2.0 * window) * res).astype(int)
    rows = np.floor((window - w.imag) / (2.0 * window) * res).astype(int)
    keep = (cols >= 0) & (cols < res) & (rows >= 0) & (rows < res)
    buf[rows[keep], cols[keep]] = color


def render_grid_image(
    fn,
    resolution: int = 512,
    window: float = 2.5,
    n_circles: int = 12,
    n_rays: int = 16,
) -> np.ndarray:
    """Forward-rasterized image of a polar grid: circles |z| = r and radial
    rays, pushed through the map."""
    _pixel_window(resolution, window)  # validates resolution
    buf = np.empty((resolution, resolution, 3), dtype=np.uint8)
    buf[:] = BACKGROUND
    n_dense = 8 * resolution
    theta = np.linspace(0.0, 2.0 * np.pi, n_dense, endpoint=False)
    radii = np.geomspace(0.15, 2.2, n_circles)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        for r in radii:
            w = np.asarray(fn(r * np.exp(1j * theta)), dtype=np.complex128)
            _paint(buf, w, window, CIRCLE_COLOR)
        s = np.geomspace(0.02, 2.5, n_dense)
        for j in range(n_rays):
            ray = s * np.exp(2j * np.pi * j / n_rays)
            w = np.asarray(fn(ray), dtype=np.complex128)
            _paint(buf, w, window, RAY_COLOR)
    return buf


def render_map(fn, style: str, resolution: int = 512, window: float = 2.5) -> np.ndarray:
    if style == "domaincolor":
        return render_domaincolor(fn, resolution, window)
    if style == "grid":
        return render_grid_image(fn, resolution, window)
    raise ValueError(f"unknown style {style!r}")
