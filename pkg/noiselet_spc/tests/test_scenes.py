import numpy as np
import pytest

from noiselet_spc.errors import ImageFormatError
from noiselet_spc.imageio import center_crop, load_pgm, save_pgm
from noiselet_spc.scenes import natural_image, sparse_phantom
from noiselet_spc.transforms.haar import haar_analyze

from conftest import random_image


def test_phantom_is_sparse_and_in_range():
    scene = sparse_phantom((32, 32), 0.05, seed=1)
    pixels = scene.pixels
    assert pixels.min() == 0.0 and pixels.max() == 1.0
    # rescaling only touches the coarsest approximation coefficient
    nonzero = np.count_nonzero(np.abs(haar_analyze(pixels).values) > 1e-12)
    assert nonzero <= 51 + 1


def test_phantom_is_seeded():
    a = sparse_phantom((16, 16), 0.1, seed=3).pixels
    assert np.array_equal(a, sparse_phantom((16, 16), 0.1, seed=3).pixels)
    assert not np.array_equal(a, sparse_phantom((16, 16), 0.1, seed=4).pixels)
    with pytest.raises(ImageFormatError):
        sparse_phantom((16, 16), 0.0, seed=0)


def test_natural_image():
    scene = natural_image((64, 32))
    assert scene.geometry == (64, 32)
    assert 0.0 <= scene.pixels.min() and scene.pixels.max() <= 1.0
    assert scene.pixels.std() > 0.05
    assert natural_image((64, 64), linear=False).pixels.mean() > natural_image((64, 64)).pixels.mean()


@pytest.mark.parametrize('bits', [8, 16])
def test_pgm_round_trip(tmp_path, bits):
    x = random_image((16, 8), seed=5)
    path = str(tmp_path / 'x.pgm')
    save_pgm(x, path, bits=bits)
    back = load_pgm(path).pixels
    assert back.shape == (16, 8)
    scale = 255 if bits == 8 else 65535
    assert np.max(np.abs(back - x)) <= 0.5 / scale + 1e-12


def test_non_power_of_two_image(tmp_path):
    path = str(tmp_path / 'odd.pgm')
    save_pgm(np.full((20, 12), 0.5), path)
    with pytest.raises(ImageFormatError):
        load_pgm(path)
    assert load_pgm(path, crop=True).geometry == (16, 8)
    assert center_crop(np.arange(20 * 12).reshape(20, 12)).shape == (16, 8)


def test_unreadable_image(tmp_path):
    path = tmp_path / 'junk.pgm'
    path.write_bytes(b'junk')
    with pytest.raises(ImageFormatError):
        load_pgm(str(path))
    with pytest.raises(ImageFormatError):
        save_pgm(np.zeros((4, 4)), str(tmp_path / 'x.pgm'), bits=12)
