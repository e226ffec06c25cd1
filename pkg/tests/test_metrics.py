import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oidct.codec import ImagePlanes
from oidct.metrics import C1, QualityReport, evaluate, gaussian_window, psnr_rgb, ssim


def const(v, h=16, w=16):
    return ImagePlanes(np.full((3, h, w), float(v)))


def noisy(rng, h=32, w=32):
    return ImagePlanes(rng.integers(20, 236, (3, h, w)).astype(float))


def test_psnr_identical_is_inf(rng):
    a = noisy(rng)
    assert psnr_rgb(a, a) == math.inf


def test_psnr_unit_difference():
    # 20*log10(255)
    assert psnr_rgb(const(100), const(101)) == pytest.approx(48.1308036086791, abs=1e-9)


def test_psnr_difference_two():
    assert psnr_rgb(const(100), const(98)) == pytest.approx(42.11020369539948, abs=1e-9)


def test_psnr_pools_channels():
    a = const(100)
    planes = a.planes.copy()
    planes[0] += 3  # mse 9 on one channel, 0 elsewhere -> pooled 3
    assert psnr_rgb(a, ImagePlanes(planes)) == pytest.approx(10 * math.log10(255**2 / 3))


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        psnr_rgb(const(0, 16, 16), const(0, 16, 17))
    with pytest.raises(ValueError):
        ssim(const(0, 16, 16), const(0, 17, 16))


def test_ssim_too_small():
    with pytest.raises(ValueError):
        ssim(const(0, 10, 40), const(0, 10, 40))


def test_ssim_identical(rng):
    a = noisy(rng)
    assert ssim(a, a) == pytest.approx(1.0, abs=1e-12)


def test_ssim_constant_offset():
    # only the luminance term survives: (2*100*110 + C1) / (100^2 + 110^2 + C1)
    expected = 0.9954764440915066
    assert (2 * 100 * 110 + C1) / (100**2 + 110**2 + C1) == pytest.approx(expected, abs=1e-15)
    assert ssim(const(100, 20, 20), const(110, 20, 20)) == pytest.approx(expected, abs=1e-9)


def test_ssim_symmetric(rng):
    a, b = noisy(rng), noisy(rng)
    assert ssim(a, b) == pytest.approx(ssim(b, a), abs=1e-15)


def test_gaussian_window():
    g = gaussian_window()
    assert len(g) == 11 and g.sum() == pytest.approx(1.0)
    assert g[5] == g.max() and np.allclose(g, g[::-1])


def test_ssim_matches_direct_window_sum(rng):
    a, b = noisy(rng, 13, 12), noisy(rng, 13, 12)
    from oidct.codec import luma
    x, y = luma(a), luma(b)
    w2 = np.outer(gaussian_window(), gaussian_window())
    C2 = (0.03 * 255) ** 2
    vals = []
    for r in range(13 - 10):
        for c in range(12 - 10):
            px, py = x[r:r + 11, c:c + 11], y[r:r + 11, c:c + 11]
            mx, my = np.sum(w2 * px), np.sum(w2 * py)
            vx = np.sum(w2 * (px - mx) ** 2)
            vy = np.sum(w2 * (py - my) ** 2)
            cxy = np.sum(w2 * (px - mx) * (py - my))
            vals.append((2 * mx * my + C1) * (2 * cxy + C2) / ((mx**2 + my**2 + C1) * (vx + vy + C2)))
    assert ssim(a, b) == pytest.approx(np.mean(vals), abs=1e-10)


@settings(max_examples=25)
@given(st.integers(0, 2**32 - 1))
def test_ssim_bounded(seed):
    rng = np.random.default_rng(seed)
    a = ImagePlanes(rng.integers(0, 256, (3, 16, 16)).astype(float))
    b = ImagePlanes(rng.integers(0, 256, (3, 16, 16)).astype(float))
    s = ssim(a, b)
    assert -1.0 <= s <= 1.0
    assert s < 1.0


def test_psnr_decreases_with_noise(rng):
    a = noisy(rng, 64, 64)
    values = []
    for amp in (1, 2, 4, 8):
        noise = rng.choice([-amp, amp], size=a.planes.shape)
        values.append(psnr_rgb(a, ImagePlanes(a.planes + noise)))
    assert all(x > y for x, y in zip(values, values[1:]))


def test_translation_invariance(rng):
    a, b = noisy(rng), noisy(rng)
    shift = ImagePlanes(a.planes + 7), ImagePlanes(b.planes + 7)
    assert psnr_rgb(*shift) == psnr_rgb(a, b)


def test_evaluate_report(rng):
    a = noisy(rng)
    r = evaluate(a, ImagePlanes(a.planes + 1))
    assert isinstance(r, QualityReport)
    assert r.per_channel_mse == (1.0, 1.0, 1.0)
    assert r.psnr_rgb == pytest.approx(48.1308036086791)
    assert 0 < r.ssim <= 1
