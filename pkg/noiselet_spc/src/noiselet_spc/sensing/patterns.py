"""Binary pattern synthesis from noiselet rows.

Two routes produce the same 0/1 patterns:

- the definition route rescales the real/imaginary parts (odd q) or their
  sum/difference (even q) of each complex noiselet row;
- the fast route runs the integer modified transform on unit vectors, with
  many unit vectors packed into the bit-planes of one integer vector.

Bit-plane t of a packed bundle (0-based over the payload) lives in bit t+1 of
each integer; bit 0 carries no payload.
"""

import logging
from collections import namedtuple
from dataclasses import dataclass

import numpy as np

from noiselet_spc import util
from noiselet_spc.errors import BundleOverflowError, IndexRangeError, PatternError
from noiselet_spc.fields import ComplexField, IntComplexField, NoiseletOrder
from noiselet_spc.sensing.plan import default_geometry
from noiselet_spc.transforms import noiselet

logger = logging.getLogger(__name__)

KIND_A = 'a'  # real part of a modified-noiselet row
KIND_B = 'b'  # imaginary part

PlaneDescriptor = namedtuple('PlaneDescriptor', field_names=['kind', 'row', 'complement'])

# rows per batch when whole noiselet rows are materialized
_BATCH_ELEMENTS = 1 << 22


@dataclass
class PatternSet:
    """m binary patterns (rows of P, uint8, length n) in the order p_1, p_2, ..., p_m."""

    patterns: np.ndarray
    plan: object

    def __len__(self):
        return len(self.patterns)


@dataclass
class PackedBundle:
    """Up to width-2 binary patterns packed into the bit-planes of one integer vector."""

    planes: np.ndarray
    plane_map: list
    width: int
    order: NoiseletOrder
    geometry: tuple

    @property
    def count(self):
        return len(self.plane_map)

    def unpack(self, t):
        """Binary pattern of payload plane t (0-based)."""
        if not 0 <= t < self.count:
            raise IndexRangeError("plane {} outside 0..{}".format(t, self.count - 1))
        return ((self.planes >> (t + 1)) & 1).astype(np.uint8)

    def unpack_all(self):
        return np.array([self.unpack(t) for t in range(self.count)], dtype=np.uint8)


def _parity_is_odd(parity):
    if isinstance(parity, NoiseletOrder):
        return parity.odd
    if parity in ('odd', 'even'):
        return parity == 'odd'
    raise ValueError("parity must be 'odd', 'even' or a NoiseletOrder, got {!r}".format(parity))


def _to_binary(values, what):
    binary = np.rint(values)
    if np.max(np.abs(values - binary), initial=0.0) > 1e-9 or np.any((binary != 0) & (binary != 1)):
        raise PatternError("{} is not binary".format(what))
    return binary.astype(np.uint8)


def _noiselet_rows(rows, order):
    """Yield (batch of 1-based rows, complex array of those noiselet rows)."""
    batch = max(1, _BATCH_ELEMENTS // order.n)
    for start in range(0, len(rows), batch):
        chunk = np.asarray(rows[start:start + batch])
        yield chunk, noiselet.noiselet_rows(chunk, order)


def pattern_pair(phi_rows, order):
    """Binary pair (p_2j-1, p_2j) of complex noiselet rows (2D: one row per pair)."""
    scale = noiselet.element_scale(order)
    re, im = np.real(phi_rows), np.imag(phi_rows)
    if order.odd:
        first, second = scale * re, scale * im
    else:
        first, second = scale * (re + im), scale * (re - im)
    return _to_binary((first + 1) / 2, "pattern"), _to_binary((second + 1) / 2, "pattern")


def build_patterns(plan):
    """Pattern matrix P of a plan, rescaled directly from the complex noiselet rows."""
    order = plan.order
    patterns = np.empty((plan.m, order.n), dtype=np.uint8)
    position = 0
    for chunk, phi in _noiselet_rows(plan.pair_rows(), order):
        first, second = pattern_pair(phi, order)
        patterns[position:position + 2 * len(chunk):2] = first
        patterns[position + 1:position + 2 * len(chunk):2] = second
        position += 2 * len(chunk)
    return PatternSet(patterns, plan)


def invert_patterns(p_pair, parity):
    """Complex noiselet row from its two binary patterns (inverse of pattern_pair)."""
    p1, p2 = (np.asarray(p, dtype=np.float64) for p in p_pair)
    if p1.shape != p2.shape or p1.ndim != 1:
        raise PatternError("pattern pair must be two vectors of equal length")
    for p in (p1, p2):
        if np.any((p != 0) & (p != 1)):
            raise PatternError("patterns must contain only 0 and 1")
    n = len(p1)
    if _parity_is_odd(parity):
        phi = (2 * p1 + 2j * p2 - (1 + 1j)) / np.sqrt(2 * n)
    else:
        phi = ((1 + 1j) * p1 + (1 - 1j) * p2 - 1) / np.sqrt(n)
    return ComplexField.from_complex(phi)


def gen_pattern_fast(k, kind, order, width=None):
    """a_k = (Re(Ñ_n row k) + 1)/2 or b_k = (Im(Ñ_n row k) + 1)/2 from the integer transform."""
    order = order if isinstance(order, NoiseletOrder) else NoiseletOrder(order)
    if not 1 <= k <= order.n:
        raise IndexRangeError("row index {} outside 1..{}".format(k, order.n))
    if kind not in (KIND_A, KIND_B):
        raise ValueError("kind must be '{}' or '{}', got {!r}".format(KIND_A, KIND_B, kind))
    width = width or util.get_param('integer_width', 64)
    # Ñ_n is symmetric, so Ñ_n e_k is row k
    out = noiselet.modified_fnt(IntComplexField.unit(k - 1, order.n, width), order)
    part = out.re if kind == KIND_A else out.im
    return ((part + 1) // 2).astype(np.uint8)


def pattern_signs(order):
    """Source and complement flag of (p_2j-1, p_2j) relative to (a_k, b_k).

    sqrt(2n) N_n = conj(w) Ñ_n with w = exp(i pi (q+1)/4). Writing Ñ_n row k as
    A + iB (A = 2a_k - 1, B = 2b_k - 1), each pattern_pair signal is +-A or +-B;
    a negative sign means the pattern is the binary complement.
    """
    order = order if isinstance(order, NoiseletOrder) else NoiseletOrder(order)
    rotation = np.exp(-1j * np.pi * (order.q + 1) / 4)
    from_a, from_b = rotation, rotation * 1j
    if order.odd:
        signals = [(from_a.real, from_b.real), (from_a.imag, from_b.imag)]
    else:
        s = np.sqrt(0.5)
        signals = [((from_a.real + from_a.imag) * s, (from_b.real + from_b.imag) * s),
                   ((from_a.real - from_a.imag) * s, (from_b.real - from_b.imag) * s)]
    signs = []
    for ca, cb in signals:
        ca, cb = int(round(ca)), int(round(cb))
        if abs(ca) + abs(cb) != 1:
            raise PatternError("pattern signal is not a signed copy of a_k or b_k")
        kind = KIND_A if ca else KIND_B
        signs.append((kind, (ca or cb) < 0))
    return tuple(signs)


def resolve_sign_map(plan):
    """Plane descriptors for all m patterns of a plan, in P order."""
    (kind1, comp1), (kind2, comp2) = pattern_signs(plan.order)
    descriptors = []
    for k in plan.pair_rows():
        descriptors.append(PlaneDescriptor(kind1, int(k), comp1))
        descriptors.append(PlaneDescriptor(kind2, int(k), comp2))
    return descriptors


def gen_bundle(rows_and_kinds, order, width=None, geometry=None):
    """Generate up to width-2 patterns with one run of the modified transform.

    e_packed = sum_t 2**(t+1) e_(k_t); the real (imaginary) part of its transform,
    shifted by the same sum and halved, carries a_(k_t) (b_(k_t)) in bit t+1.
    """
    order = order if isinstance(order, NoiseletOrder) else NoiseletOrder(order)
    width = width or util.get_param('integer_width', 64)
    descriptors = [d if isinstance(d, PlaneDescriptor) else PlaneDescriptor(*d) for d in rows_and_kinds]
    count = len(descriptors)
    if count > width - 2:
        raise BundleOverflowError("{} planes exceed the {}-bit budget of {} planes".format(
            count, width, width - 2))

    packed = IntComplexField.zeros(order.n, width)
    mask_b = 0
    mask_complement = 0
    for t, d in enumerate(descriptors):
        if d.kind not in (KIND_A, KIND_B):
            raise ValueError("kind must be '{}' or '{}', got {!r}".format(KIND_A, KIND_B, d.kind))
        if not 1 <= d.row <= order.n:
            raise IndexRangeError("row index {} outside 1..{}".format(d.row, order.n))
        bit = 1 << (t + 1)
        packed.re[d.row - 1] += bit
        if d.kind == KIND_B:
            mask_b |= bit
        if d.complement:
            mask_complement |= bit

    out = noiselet.modified_fnt(packed, order)
    # Re and Im are even; halve before adding the offset so nothing exceeds the width
    offset = (1 << count) - 1
    a_packed = (out.re >> 1) + offset
    b_packed = (out.im >> 1) + offset
    planes = (a_packed & ~mask_b) | (b_packed & mask_b)
    planes ^= mask_complement
    return PackedBundle(planes, descriptors, width, order, tuple(geometry or default_geometry(order)))


def bundles_for_plan(plan, planes_per_bundle=None, width=None):
    """Sign-resolved bundles covering all m patterns of a plan, in P order."""
    planes_per_bundle = planes_per_bundle or util.get_param('frame_planes', 23)
    descriptors = resolve_sign_map(plan)
    return [gen_bundle(descriptors[i:i + planes_per_bundle], plan.order, width, plan.geometry)
            for i in range(0, len(descriptors), planes_per_bundle)]


def fast_patterns(plan, planes_per_bundle=None, width=None):
    """Pattern matrix P of a plan through the packed integer route."""
    bundles = bundles_for_plan(plan, planes_per_bundle, width)
    if not bundles:
        return PatternSet(np.empty((0, plan.n), dtype=np.uint8), plan)
    return PatternSet(np.concatenate([b.unpack_all() for b in bundles]), plan)
