"""Dense, fast and integer-only (modified) noiselet transforms.

Row and column indices in the public functions are 1-based (row j of N_n means
N_n[j-1, :] in NumPy); arrays are 0-based as usual. N_n is unitary, Ñ_n is
integer valued with Ñ_n = sqrt(2n) * exp(i*pi*(q+1)/4) * N_n.
"""

import logging

import numpy as np

from noiselet_spc import util
from noiselet_spc.errors import DenseLimitError, IndexRangeError, OverflowRiskError, SizeError
from noiselet_spc.fields import ComplexField, IntComplexField, NoiseletOrder, is_power_of_two
from noiselet_spc.transforms.base_transform import BaseTransform

logger = logging.getLogger(__name__)

FORWARD = 'forward'
INVERSE = 'inverse'

# N_2n = GENERATOR kron N_n
GENERATOR = 0.5 * np.array([[1 - 1j, 1 + 1j],
                            [1 + 1j, 1 - 1j]])


def _as_order(order):
    return order if isinstance(order, NoiseletOrder) else NoiseletOrder(order)


def _check_dense(order):
    limit = util.get_param('dense_limit', 4096)
    if order.n > limit:
        raise DenseLimitError("dense matrix of size {} exceeds dense_limit {}".format(order.n, limit))


def _check_direction(direction):
    if direction not in (FORWARD, INVERSE):
        raise ValueError("direction must be '{}' or '{}', got {!r}".format(FORWARD, INVERSE, direction))


def dense_noiselet(order):
    """Return the unitary n x n noiselet matrix N_n built by the Kronecker recursion."""
    order = _as_order(order)
    _check_dense(order)
    matrix = np.ones((1, 1), dtype=np.complex128)
    for _ in range(order.q):
        matrix = np.kron(GENERATOR, matrix)
    return ComplexField.from_complex(matrix)


def dense_modified_noiselet(order):
    """Return Ñ_n from Ñ_1 = [1+i], Ñ_2n = [[1, i], [i, 1]] kron Ñ_n, in integer arithmetic."""
    order = _as_order(order)
    _check_dense(order)
    re = np.ones((1, 1), dtype=np.int64)
    im = np.ones((1, 1), dtype=np.int64)
    for _ in range(order.q):
        # i * (re + i im) = -im + i re
        re, im = np.block([[re, -im], [-im, re]]), np.block([[im, re], [re, im]])
    return IntComplexField(re, im, 64)


def element_set(order):
    """The four values taken by sqrt(n) N_n (even q) or sqrt(2n) N_n (odd q)."""
    order = _as_order(order)
    if order.odd:
        return {1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j}
    return {1, -1, 1j, -1j}


def element_scale(order):
    """Factor that maps the entries of N_n onto element_set(order)."""
    order = _as_order(order)
    return np.sqrt(2 * order.n) if order.odd else np.sqrt(order.n)


def _apply_generator(z, g):
    """Multiply z (axis 0 of length 2**q) by g kron g kron ... kron g in place."""
    n = z.shape[0]
    rest = z.shape[1:]
    h = 1
    while h < n:
        blocks = z.reshape((n // (2 * h), 2, h) + rest)
        u = blocks[:, 0].copy()
        w = blocks[:, 1].copy()
        blocks[:, 0] = g[0, 0] * u + g[0, 1] * w
        blocks[:, 1] = g[1, 0] * u + g[1, 1] * w
        h *= 2
    return z


def _generator_for(direction):
    _check_direction(direction)
    # N_n is symmetric, so N_n^H = conj(N_n) is built from conj(GENERATOR)
    return GENERATOR if direction == FORWARD else GENERATOR.conj()


def fnt(v, order, direction=FORWARD):
    """Fast noiselet transform of a vector: N_n v (forward) or N_n^H v (inverse), O(n log n)."""
    order = _as_order(order)
    if v.re.ndim != 1 or len(v) != order.n:
        raise SizeError("vector of shape {} does not match transform size {}".format(v.shape, order.n))
    z = v.to_complex().astype(np.complex128, copy=True)
    return ComplexField.from_complex(_apply_generator(z, _generator_for(direction)))


def fnt2d(a, direction=FORWARD):
    """2D noiselet transform N_n A N_k^T of an n x k matrix (inverse: N_n^H A conj(N_k))."""
    if a.re.ndim != 2:
        raise SizeError("fnt2d expects a matrix, got shape {}".format(a.shape))
    rows, cols = a.shape
    if not (is_power_of_two(rows) and is_power_of_two(cols)):
        raise SizeError("matrix sides {}x{} must be powers of two".format(rows, cols))
    g = _generator_for(direction)
    z = a.to_complex().astype(np.complex128, copy=True)
    z = _apply_generator(z, g)
    z = _apply_generator(np.ascontiguousarray(z.T), g).T
    return ComplexField.from_complex(np.ascontiguousarray(z))


def mirror_row(j, order):
    """Return n+1-j: row j of N_n is the complex conjugate of row n+1-j (1-based)."""
    order = _as_order(order)
    if not 1 <= j <= order.n:
        raise IndexRangeError("row index {} outside 1..{}".format(j, order.n))
    return order.n + 1 - j


def noiselet_row(k, order):
    """Row k (1-based) of N_n, computed as N_n e_k since N_n is symmetric."""
    order = _as_order(order)
    if not 1 <= k <= order.n:
        raise IndexRangeError("row index {} outside 1..{}".format(k, order.n))
    e = np.zeros(order.n)
    e[k - 1] = 1.0
    return fnt(ComplexField(e, np.zeros(order.n)), order)


def noiselet_rows(rows, order):
    """Rows (1-based) of N_n as a complex array, one array row per index; O(n log n) each."""
    order = _as_order(order)
    rows = np.asarray(rows, dtype=np.int64)
    if rows.size and (rows.min() < 1 or rows.max() > order.n):
        raise IndexRangeError("row indices must lie in 1..{}".format(order.n))
    units = np.zeros((order.n, len(rows)), dtype=np.complex128)
    units[rows - 1, np.arange(len(rows))] = 1.0
    return _apply_generator(units, GENERATOR).T


def modified_fnt(v, order):
    """Modified noiselet transform Ñ_n v using integer additions and subtractions only.

    Axis 0 of v is transformed; a 2D input transforms every column. Every
    intermediate value is bounded by sum(|re| + |im|) of the input column, which
    must fit the signed width of v.
    """
    order = _as_order(order)
    if v.re.ndim not in (1, 2) or v.shape[0] != order.n:
        raise SizeError("input of shape {} does not match transform size {}".format(v.shape, order.n))
    _check_overflow(v)

    re = v.re.copy()
    im = v.im.copy()
    rest = re.shape[1:]
    h = order.n // 2
    while h >= 1:
        r = re.reshape((-1, 2, h) + rest)
        i = im.reshape((-1, 2, h) + rest)
        re_u = r[:, 0].copy()
        im_u = i[:, 0].copy()
        # (u, w) -> (u + i w, w + i u)
        r[:, 0] -= i[:, 1]
        i[:, 0] += r[:, 1]
        r[:, 1] -= im_u
        i[:, 1] += re_u
        h //= 2
    # global (1+i) factor
    re, im = re - im, re + im
    return IntComplexField(re, im, v.width)


def _check_overflow(v):
    limit = (1 << (v.width - 1)) - 1
    if v.re.ndim == 1:
        bound = v.l1_bound()
    else:
        bound = max(IntComplexField(v.re[:, c], v.im[:, c], v.width).l1_bound()
                    for c in range(v.shape[1]))
    if bound > limit:
        raise OverflowRiskError("input L1 magnitude {} exceeds the {}-bit budget {}".format(
            bound, v.width, limit))


def verify_modified_relation(order):
    """Max entrywise deviation between Ñ_n (integer butterfly) and sqrt(2n) exp(i pi (q+1)/4) N_n."""
    order = _as_order(order)
    _check_dense(order)
    identity = np.eye(order.n, dtype=np.int64)
    modified = modified_fnt(IntComplexField(identity, np.zeros_like(identity), 64), order).to_complex()
    phase = np.exp(1j * np.pi * (order.q + 1) / 4)
    scaled = np.sqrt(2 * order.n) * dense_noiselet(order).to_complex() * phase
    deviation = float(np.max(np.abs(modified - scaled)))
    logger.debug("modified relation q=%d: max deviation %.3e", order.q, deviation)
    return deviation


class NoiseletTransform(BaseTransform):
    """2D noiselet transform of a complex image; the row-major flattening matches N_(rows*cols)."""

    def __init__(self, shape):
        super().__init__(shape)
        self.order = NoiseletOrder.from_shape(self.shape)

    def forward(self, x):
        return fnt2d(ComplexField.from_complex(np.reshape(x, self.shape))).to_complex()

    def inverse(self, coeffs):
        return fnt2d(ComplexField.from_complex(np.reshape(coeffs, self.shape)), INVERSE).to_complex()
