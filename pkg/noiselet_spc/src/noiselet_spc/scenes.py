"""Built-in test scenes: a natural photograph and sparse Haar phantoms."""

import logging

import numpy as np
from skimage import data, exposure, filters, img_as_float, transform

from noiselet_spc import util
from noiselet_spc.errors import ImageFormatError
from noiselet_spc.sensing.spc import SceneImage
from noiselet_spc.transforms.haar import WaveletCoeffs, haar_synthesize, max_levels

logger = logging.getLogger(__name__)

DISPLAY_GAMMA = 2.2


def natural_image(shape=(256, 256), blur=None, linear=True):
    """The camera test photograph resized to shape.

    linear undoes the display gamma so pixel values act as reflectance. blur is
    the Gaussian sigma in pixels (default: longer side / 128), standing in for
    the finite resolution of the imaging optics.
    """
    image = img_as_float(data.camera())
    if linear:
        image = exposure.adjust_gamma(image, DISPLAY_GAMMA)
    image = transform.resize(image, shape, anti_aliasing=True)
    sigma = max(shape) / 128 if blur is None else blur
    if sigma > 0:
        image = filters.gaussian(image, sigma=sigma, preserve_range=True)
    return SceneImage(image)


def sparse_phantom(shape, fraction, seed, levels=None):
    """Image with round(fraction * n) random nonzero Haar coefficients, rescaled to [0, 1].

    The affine rescale keeps the support except for the coarsest approximation
    coefficients, which absorb the offset.
    """
    rows, cols = shape
    n = rows * cols
    if not 0 < fraction <= 1:
        raise ImageFormatError("fraction {} outside (0, 1]".format(fraction))
    levels = max_levels(shape) if levels is None else levels
    rng = util.make_rng(seed)
    count = max(1, int(round(fraction * n)))
    support = rng.choice(n, size=count, replace=False)
    values = np.zeros(n)
    values[support] = rng.choice([-1.0, 1.0], size=count) * rng.uniform(0.5, 1.0, size=count)
    x = haar_synthesize(WaveletCoeffs(values.reshape(shape), levels))
    span = x.max() - x.min()
    if span == 0:
        return SceneImage(np.full(shape, 0.5))
    logger.debug("phantom %dx%d with %d Haar atoms (seed %s)", rows, cols, count, seed)
    return SceneImage((x - x.min()) / span)
