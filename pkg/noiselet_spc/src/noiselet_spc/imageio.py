"""Grayscale PGM input and output through Pillow."""

import logging

import numpy as np
from PIL import Image

from noiselet_spc.errors import ImageFormatError
from noiselet_spc.fields import is_power_of_two
from noiselet_spc.sensing.spc import SceneImage

logger = logging.getLogger(__name__)

_FULL_SCALE = {8: 255, 16: 65535}


def _largest_power_of_two(k):
    return 1 << (int(k).bit_length() - 1)


def center_crop(pixels):
    """Centered crop to the largest power-of-two sides that fit."""
    rows, cols = pixels.shape
    r, c = _largest_power_of_two(rows), _largest_power_of_two(cols)
    top, left = (rows - r) // 2, (cols - c) // 2
    return pixels[top:top + r, left:left + c]


def load_pgm(path, crop=False):
    """Load a grayscale image scaled to [0, 1]; 8-bit and 16-bit PGM are read exactly."""
    try:
        with Image.open(path) as img:
            if img.mode == 'L':
                pixels = np.asarray(img, dtype=np.float64) / _FULL_SCALE[8]
            elif img.mode in ('I', 'I;16', 'I;16B'):
                pixels = np.asarray(img, dtype=np.float64) / _FULL_SCALE[16]
            else:
                pixels = np.asarray(img.convert('L'), dtype=np.float64) / _FULL_SCALE[8]
    except OSError as e:
        raise ImageFormatError("cannot read image {}: {}".format(path, e))

    if not (is_power_of_two(pixels.shape[0]) and is_power_of_two(pixels.shape[1])):
        if not crop:
            raise ImageFormatError("image {} is {}x{}; sides must be powers of two "
                                   "(use --center-crop)".format(path, *pixels.shape))
        pixels = center_crop(pixels)
        logger.info("cropped %s to %dx%d", path, *pixels.shape)
    return SceneImage(pixels)


def save_pgm(image, path, bits=8):
    """Write a [0, 1] image as binary PGM with 8 or 16 bits per pixel."""
    if bits not in _FULL_SCALE:
        raise ImageFormatError("PGM depth must be 8 or 16 bits, got {}".format(bits))
    pixels = np.clip(np.asarray(getattr(image, 'pixels', image), dtype=np.float64), 0.0, 1.0)
    levels = np.rint(pixels * _FULL_SCALE[bits])
    if bits == 8:
        img = Image.fromarray(levels.astype(np.uint8))
    else:
        img = Image.fromarray(levels.astype(np.int32))
    img.save(path, format='PPM')
