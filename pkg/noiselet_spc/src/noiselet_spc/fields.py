"""Carrier types shared by the transforms: transform order and split-storage complex arrays."""

from dataclasses import dataclass

import numpy as np

from noiselet_spc.errors import SizeError

_INT_DTYPES = {8: np.int8, 16: np.int16, 32: np.int32, 64: np.int64}


def is_power_of_two(n):
    return int(n) >= 1 and (int(n) & (int(n) - 1)) == 0


def log2_exact(n):
    """Return q with n == 2**q, or raise SizeError."""
    if not is_power_of_two(n):
        raise SizeError("size {} is not a power of two".format(n))
    return int(n).bit_length() - 1


@dataclass(frozen=True)
class NoiseletOrder:
    """Transform size n = 2**q; the parity of q selects the element set of the matrix."""

    q: int

    def __post_init__(self):
        if int(self.q) != self.q or self.q < 0:
            raise SizeError("order q must be a nonnegative integer, got {}".format(self.q))

    @property
    def n(self):
        return 1 << self.q

    @property
    def odd(self):
        return self.q % 2 == 1

    @classmethod
    def from_size(cls, n):
        return cls(log2_exact(n))

    @classmethod
    def from_shape(cls, shape):
        """Order of the 1D transform covering all pixels of a 2D shape (both sides powers of two)."""
        rows, cols = shape
        return cls(log2_exact(rows) + log2_exact(cols))


@dataclass
class ComplexField:
    """Complex vector or matrix stored as separate real and imaginary planes."""

    re: np.ndarray
    im: np.ndarray

    def __post_init__(self):
        self.re = np.asarray(self.re, dtype=np.float64)
        self.im = np.asarray(self.im, dtype=np.float64)
        if self.re.shape != self.im.shape:
            raise SizeError("real plane {} and imaginary plane {} differ in shape".format(
                self.re.shape, self.im.shape))

    @property
    def shape(self):
        return self.re.shape

    def __len__(self):
        return len(self.re)

    @classmethod
    def from_complex(cls, z):
        z = np.asarray(z)
        return cls(np.real(z).copy(), np.imag(z).copy())

    @classmethod
    def zeros(cls, shape):
        return cls(np.zeros(shape), np.zeros(shape))

    def to_complex(self):
        return self.re + 1j * self.im

    def conj(self):
        return ComplexField(self.re.copy(), -self.im)

    def __getitem__(self, item):
        return ComplexField(self.re[item], self.im[item])


@dataclass
class IntComplexField:
    """Integer complex vector in split storage; width is the signed bit width of both planes."""

    re: np.ndarray
    im: np.ndarray
    width: int = 64

    def __post_init__(self):
        if self.width not in _INT_DTYPES:
            raise SizeError("unsupported integer width {}; use one of {}".format(
                self.width, sorted(_INT_DTYPES)))
        dtype = _INT_DTYPES[self.width]
        self.re = np.asarray(self.re).astype(dtype, copy=False)
        self.im = np.asarray(self.im).astype(dtype, copy=False)
        if self.re.shape != self.im.shape:
            raise SizeError("real plane {} and imaginary plane {} differ in shape".format(
                self.re.shape, self.im.shape))

    @property
    def dtype(self):
        return _INT_DTYPES[self.width]

    @property
    def shape(self):
        return self.re.shape

    def __len__(self):
        return len(self.re)

    @classmethod
    def zeros(cls, n, width=64):
        re = np.zeros(n, dtype=_INT_DTYPES[width])
        return cls(re, np.zeros_like(re), width)

    @classmethod
    def unit(cls, k, n, width=64, weight=1):
        """weight * e_k for a 0-based index k."""
        re = np.zeros(n, dtype=_INT_DTYPES[width])
        re[k] = weight
        return cls(re, np.zeros_like(re), width)

    def l1_bound(self):
        """Sum of |re| + |im| as a Python int; bounds every intermediate of the modified transform."""
        nonzero = np.concatenate([self.re[self.re != 0], self.im[self.im != 0]]).astype(object)
        return int(sum(abs(v) for v in nonzero))

    def to_complex(self):
        return self.re.astype(np.float64) + 1j * self.im.astype(np.float64)
