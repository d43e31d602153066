"""Image quality metrics and best-k Haar approximation."""

import numpy as np

from noiselet_spc.errors import ReconError
from noiselet_spc.transforms.haar import WaveletCoeffs

# MSE at or below (EXACT_TOLERANCE * peak)**2 counts as a perfect match
EXACT_TOLERANCE = 1e-12


def _pixels(x):
    return np.asarray(getattr(x, 'pixels', x), dtype=np.float64)


def _pair(x_hat, x_ref):
    a, b = _pixels(x_hat), _pixels(x_ref)
    if a.shape != b.shape:
        raise ReconError("images differ in geometry: {} vs {}".format(a.shape, b.shape))
    return a, b


def register(x_hat, x_ref):
    """Gain/offset least-squares fit of x_hat onto x_ref's intensity levels."""
    a, b = _pair(x_hat, x_ref)
    design = np.column_stack([a.ravel(), np.ones(a.size)])
    (gain, offset), *_ = np.linalg.lstsq(design, b.ravel(), rcond=None)
    return gain * a + offset


def mse(x_hat, x_ref):
    a, b = _pair(x_hat, x_ref)
    return float(np.mean((a - b) ** 2))


def psnr(x_hat, x_ref, register_levels=False):
    """10 log10(max(x_ref)**2 / MSE) in dB; +inf when the images match."""
    a, b = _pair(x_hat, x_ref)
    if register_levels:
        a = register(a, b)
    peak = float(np.max(b))
    error = mse(a, b)
    if error <= (EXACT_TOLERANCE * max(peak, 1.0)) ** 2:
        return np.inf
    if peak <= 0:
        raise ReconError("PSNR needs a reference image with a positive peak")
    return float(10 * np.log10(peak ** 2 / error))


def compress_topk(f, fraction):
    """Keep the ceil(fraction * n) largest-magnitude coefficients; ties go to the lower linear index."""
    if not 0 < fraction <= 1:
        raise ReconError("fraction {} outside (0, 1]".format(fraction))
    values = np.asarray(f.values)
    flat = values.ravel()
    keep = int(np.ceil(fraction * flat.size))
    order = np.argsort(-np.abs(flat), kind='stable')
    out = np.zeros_like(flat)
    out[order[:keep]] = flat[order[:keep]]
    return WaveletCoeffs(out.reshape(values.shape), f.levels)
