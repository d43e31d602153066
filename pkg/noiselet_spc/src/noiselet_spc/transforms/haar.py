"""Orthonormal multilevel 2D Haar wavelets (the sparsity basis) and mutual coherence."""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import hadamard

from noiselet_spc.errors import SizeError
from noiselet_spc.fields import ComplexField, is_power_of_two, log2_exact
from noiselet_spc.transforms.base_transform import BaseTransform

SQRT_HALF = np.sqrt(0.5)


@dataclass
class WaveletCoeffs:
    """Haar coefficients in the Mallat layout: approximation in the top-left corner."""

    values: np.ndarray
    levels: int

    @property
    def shape(self):
        return self.values.shape


def max_levels(shape):
    """Full decomposition depth for an image shape (log2 of the shorter side)."""
    rows, cols = _check_shape(shape)
    return min(log2_exact(rows), log2_exact(cols))


def _check_shape(shape):
    if len(shape) != 2 or not (is_power_of_two(shape[0]) and is_power_of_two(shape[1])):
        raise SizeError("image shape {} must be 2D with power-of-two sides".format(tuple(shape)))
    return shape


def _check_levels(shape, levels):
    if levels is None:
        return max_levels(shape)
    if not 0 <= levels <= max_levels(shape):
        raise SizeError("levels {} outside 0..{} for shape {}".format(levels, max_levels(shape), shape))
    return int(levels)


def _analyze_axis0(a):
    even, odd = a[0::2], a[1::2]
    return np.concatenate([(even + odd) * SQRT_HALF, (even - odd) * SQRT_HALF], axis=0)


def _synthesize_axis0(c):
    half = c.shape[0] // 2
    low, high = c[:half], c[half:]
    out = np.empty_like(c)
    out[0::2] = (low + high) * SQRT_HALF
    out[1::2] = (low - high) * SQRT_HALF
    return out


def haar_analyze(x, levels=None):
    """Full orthonormal multilevel 2D Haar decomposition (separable row/column passes per level)."""
    x = np.asarray(x, dtype=np.float64)
    _check_shape(x.shape)
    levels = _check_levels(x.shape, levels)
    values = x.copy()
    rows, cols = x.shape
    for _ in range(levels):
        block = values[:rows, :cols]
        block = _analyze_axis0(block.T).T  # rows
        values[:rows, :cols] = _analyze_axis0(block)  # columns
        rows //= 2
        cols //= 2
    return WaveletCoeffs(values, levels)


def haar_synthesize(f):
    """Exact inverse of haar_analyze."""
    values = np.asarray(f.values, dtype=np.float64)
    _check_shape(values.shape)
    levels = _check_levels(values.shape, f.levels)
    x = values.copy()
    rows, cols = values.shape
    for level in reversed(range(levels)):
        r, c = rows >> level, cols >> level
        block = _synthesize_axis0(x[:r, :c])
        x[:r, :c] = _synthesize_axis0(block.T).T
    return x


def haar_basis(n):
    """Dense 1D orthonormal Haar basis of size n; row k is the k-th atom."""
    levels = log2_exact(n)
    return np.array([_synthesize_1d(unit, levels) for unit in np.eye(n)])


def _synthesize_1d(c, levels):
    x = c.copy()
    n = len(c)
    for level in reversed(range(levels)):
        size = n >> level
        x[:size] = _synthesize_axis0(x[:size])
    return x


def haar_basis_2d(shape, levels=None):
    """Dense basis of the 2D transform; row k is the row-major flattened atom of coefficient k."""
    rows, cols = _check_shape(shape)
    levels = _check_levels(shape, levels)
    n = rows * cols
    atoms = np.empty((n, n))
    for k in range(n):
        unit = np.zeros(n)
        unit[k] = 1.0
        atoms[k] = haar_synthesize(WaveletCoeffs(unit.reshape(rows, cols), levels)).ravel()
    return atoms


def walsh_hadamard_basis(n):
    """Unitary Walsh-Hadamard matrix with entries +-1/sqrt(n)."""
    log2_exact(n)
    return hadamard(n) / np.sqrt(n)


def coherence(phi_basis, psi_basis):
    """Mutual coherence sqrt(n) * max |<phi_j, psi_k>| of two n x n bases given by rows."""
    phi = phi_basis.to_complex() if isinstance(phi_basis, ComplexField) else np.asarray(phi_basis)
    psi = psi_basis.to_complex() if isinstance(psi_basis, ComplexField) else np.asarray(psi_basis)
    if phi.ndim != 2 or phi.shape[0] != phi.shape[1] or phi.shape != psi.shape:
        raise SizeError("bases must both be n x n, got {} and {}".format(phi.shape, psi.shape))
    n = phi.shape[0]
    return float(np.sqrt(n) * np.max(np.abs(phi @ psi.conj().T)))


def sparsity(coeffs, tol=1e-12):
    """Fraction of coefficients whose magnitude exceeds tol times the largest one."""
    values = np.abs(coeffs.values)
    peak = values.max()
    if peak == 0:
        return 0.0
    return float(np.count_nonzero(values > tol * peak)) / values.size


class HaarTransform(BaseTransform):
    """Full-depth 2D Haar transform as a BaseTransform."""

    def __init__(self, shape, levels=None):
        super().__init__(shape)
        self.levels = _check_levels(self.shape, levels)

    def forward(self, x):
        return haar_analyze(np.reshape(x, self.shape), self.levels).values

    def inverse(self, coeffs):
        return haar_synthesize(WaveletCoeffs(np.reshape(coeffs, self.shape), self.levels))
