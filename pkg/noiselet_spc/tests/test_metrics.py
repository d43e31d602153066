import numpy as np
import pytest

from noiselet_spc.errors import ReconError
from noiselet_spc.recon.metrics import compress_topk, mse, psnr, register
from noiselet_spc.sensing.spc import SceneImage
from noiselet_spc.transforms.haar import WaveletCoeffs, haar_analyze

from conftest import random_image


def reference(shape=(8, 8)):
    x = random_image(shape, seed=1) * 0.8
    x[0, 0] = 1.0
    return x


def test_identical_images_score_infinity():
    x = reference()
    assert psnr(x, x) == np.inf
    assert psnr(SceneImage(x), SceneImage(x.copy())) == np.inf


def test_psnr_of_a_known_error():
    x = reference()
    assert mse(x + 0.1, x) == pytest.approx(0.01)
    assert psnr(x + 0.1, x) == pytest.approx(20.0)


def test_registration_removes_gain_and_offset():
    x = reference()
    scaled = 2.0 * x + 0.3
    assert psnr(scaled, x) < 10
    assert psnr(scaled, x, register_levels=True) == np.inf
    assert np.max(np.abs(register(scaled, x) - x)) < 1e-12


def test_geometry_mismatch():
    with pytest.raises(ReconError):
        psnr(np.zeros((4, 4)), np.zeros((4, 8)))


def test_topk_keeps_everything_at_full_fraction():
    coeffs = haar_analyze(random_image((8, 8), seed=2))
    assert np.array_equal(compress_topk(coeffs, 1.0).values, coeffs.values)


def test_topk_single_atom():
    values = np.zeros((4, 4))
    values[2, 1] = -5.0
    values[0, 3] = 0.5
    kept = compress_topk(WaveletCoeffs(values, 2), 1 / 16).values
    assert np.count_nonzero(kept) == 1
    assert kept[2, 1] == -5.0


def test_topk_ties_go_to_the_lower_index():
    kept = compress_topk(WaveletCoeffs(np.array([[3.0, -3.0, 1.0, 3.0]]), 0), 0.5).values
    assert kept.tolist() == [[3.0, -3.0, 0.0, 0.0]]


@pytest.mark.parametrize('fraction', [0.0, -0.1, 1.5])
def test_topk_fraction_range(fraction):
    with pytest.raises(ReconError):
        compress_topk(WaveletCoeffs(np.ones((2, 2)), 1), fraction)
