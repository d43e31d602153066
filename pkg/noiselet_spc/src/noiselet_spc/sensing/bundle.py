"""Framed binary stream of packed pattern bundles.

Each frame is a fixed little-endian header, one plane-map entry per payload
plane and n payload words. Payload plane t sits in bit t+1 of every word; bit 0
is the synchronization plane and is always set, so a frame of 23 payload planes
occupies 24 bit-planes.
"""

import logging
import os

import numpy as np

from noiselet_spc import util
from noiselet_spc.errors import StreamFormatError
from noiselet_spc.fields import NoiseletOrder
from noiselet_spc.sensing.patterns import PackedBundle, PlaneDescriptor

logger = logging.getLogger(__name__)

MAGIC = b'NSPB'
MAX_FRAME_PLANES = 23
SYNC_BIT = 1

HEADER_DTYPE = np.dtype([
    ('magic', 'S4'),
    ('version', '<u2'),
    ('q', 'u1'),
    ('rows', '<u4'),
    ('cols', '<u4'),
    ('planes', 'u1'),
    ('width', 'u1'),
    ('pad', 'u1'),
])

PLANE_DTYPE = np.dtype([
    ('kind', 'S1'),
    ('complement', 'u1'),
    ('row', '<u4'),
])

WORD_DTYPE = np.dtype('<u4')


def _stream_version():
    return int(util.get_param('stream_version', 1))


def encode_frame(bundle):
    """Bytes of one frame."""
    if bundle.count > MAX_FRAME_PLANES:
        raise StreamFormatError("{} payload planes exceed the frame limit of {}".format(
            bundle.count, MAX_FRAME_PLANES))
    rows, cols = bundle.geometry
    header = np.zeros(1, dtype=HEADER_DTYPE)
    header[0] = (MAGIC, _stream_version(), bundle.order.q, rows, cols, bundle.count, bundle.width, 0)

    plane_map = np.zeros(bundle.count, dtype=PLANE_DTYPE)
    for t, d in enumerate(bundle.plane_map):
        plane_map[t] = (d.kind.encode('ascii'), int(bool(d.complement)), d.row)

    words = (np.asarray(bundle.planes, dtype=np.int64) | SYNC_BIT).astype(WORD_DTYPE)
    return header.tobytes() + plane_map.tobytes() + words.tobytes()


def write_bundle_stream(bundles, destination):
    """Write bundles as consecutive frames to a path or a binary file object; returns bytes written."""
    if isinstance(destination, (str, os.PathLike)):
        with open(destination, 'wb') as f:
            return write_bundle_stream(bundles, f)
    written = 0
    for bundle in bundles:
        frame = encode_frame(bundle)
        destination.write(frame)
        written += len(frame)
    logger.debug("wrote %d bytes of bundle frames", written)
    return written


def _take(buffer, offset, dtype, count, what):
    end = offset + dtype.itemsize * count
    if end > len(buffer):
        raise StreamFormatError("truncated {} at byte {}".format(what, offset))
    return np.frombuffer(buffer, dtype=dtype, count=count, offset=offset), end


def decode_frame(buffer, offset=0):
    """Parse the frame starting at offset; returns (PackedBundle, offset of the next frame)."""
    header, offset = _take(buffer, offset, HEADER_DTYPE, 1, "frame header")
    header = header[0]
    if header['magic'] != MAGIC:
        raise StreamFormatError("bad frame magic {!r}".format(bytes(header['magic'])))
    if header['version'] != _stream_version():
        raise StreamFormatError("unsupported stream version {}".format(int(header['version'])))
    count = int(header['planes'])
    if count > MAX_FRAME_PLANES:
        raise StreamFormatError("frame declares {} payload planes, limit is {}".format(
            count, MAX_FRAME_PLANES))
    order = NoiseletOrder(int(header['q']))
    rows, cols = int(header['rows']), int(header['cols'])
    if rows * cols != order.n:
        raise StreamFormatError("geometry {}x{} does not hold 2**{} pixels".format(rows, cols, order.q))

    entries, offset = _take(buffer, offset, PLANE_DTYPE, count, "plane map")
    plane_map = [PlaneDescriptor(e['kind'].decode('ascii'), int(e['row']), bool(e['complement']))
                 for e in entries]
    words, offset = _take(buffer, offset, WORD_DTYPE, order.n, "payload")
    if np.any((words & SYNC_BIT) == 0):
        raise StreamFormatError("synchronization plane is not all ones")
    planes = (words & ~np.uint32(SYNC_BIT)).astype(np.int64)
    return PackedBundle(planes, plane_map, int(header['width']), order, (rows, cols)), offset


def read_bundle_stream(source):
    """Read every frame from a path, a binary file object or a bytes buffer."""
    if isinstance(source, (str, os.PathLike)):
        with open(source, 'rb') as f:
            buffer = f.read()
    elif isinstance(source, (bytes, bytearray, memoryview)):
        buffer = bytes(source)
    else:
        buffer = source.read()
    bundles = []
    offset = 0
    while offset < len(buffer):
        bundle, offset = decode_frame(buffer, offset)
        bundles.append(bundle)
    logger.debug("read %d bundle frames", len(bundles))
    return bundles
