"""Single-pixel detector simulation and restoration of complex noiselet measurements.

A reading is the inner product of a binary pattern with the scene plus Gaussian
detector noise. Together with one total-intensity reading, the m real readings
of m/2 pattern pairs restore m complex noiselet measurements (m/2 directly and
m/2 by conjugate mirroring).
"""

import logging
import zipfile
from dataclasses import dataclass

import numpy as np

from noiselet_spc import util
from noiselet_spc.errors import ImageFormatError, MeasurementError, StreamFormatError
from noiselet_spc.fields import ComplexField, NoiseletOrder, is_power_of_two
from noiselet_spc.sensing.plan import dump_plan, parse_plan
from noiselet_spc.transforms import noiselet

logger = logging.getLogger(__name__)

PLAIN = 'plain'
DIFFERENTIAL = 'differential'
MODES = (PLAIN, DIFFERENTIAL)

# E|noise of one restored measurement|^2 in units of (sigma_abs^2 / n)
_NOISE_FACTOR = {PLAIN: 5.0, DIFFERENTIAL: 4.0}


@dataclass(frozen=True, eq=False)
class SceneImage:
    """Reflectance image with values clamped to [0, 1] and power-of-two sides."""

    pixels: np.ndarray

    def __post_init__(self):
        pixels = np.asarray(self.pixels, dtype=np.float64)
        if pixels.ndim != 2:
            raise ImageFormatError("scene must be a 2D grayscale array, got shape {}".format(pixels.shape))
        if not (is_power_of_two(pixels.shape[0]) and is_power_of_two(pixels.shape[1])):
            raise ImageFormatError("scene sides {}x{} must be powers of two".format(*pixels.shape))
        object.__setattr__(self, 'pixels', np.clip(pixels, 0.0, 1.0))

    @property
    def geometry(self):
        return self.pixels.shape

    @property
    def n(self):
        return self.pixels.size

    @property
    def order(self):
        return NoiseletOrder.from_shape(self.geometry)

    def flat(self):
        """Row-major pixel vector, the vector the 1D noiselet rows act on."""
        return self.pixels.ravel()


@dataclass(frozen=True, eq=False)
class MeasurementRecord:
    """Readings of one acquisition.

    y_tilde holds one reading per pattern in P order; total_intensity is the
    unmodulated reading. In differential mode y_tilde holds half differences and
    total_intensity the all-on minus all-off difference (not halved).
    noise_scale is the absolute noise standard deviation that was applied.
    """

    y_tilde: np.ndarray
    total_intensity: float
    mode: str
    noise_sigma: float
    noise_scale: float
    plan: object = None
    seed: int = None

    def __len__(self):
        return len(self.y_tilde)


def _as_scene(x):
    return x if isinstance(x, SceneImage) else SceneImage(x)


def _check_mode(mode):
    mode = mode or util.get_param('mode', PLAIN)
    if mode not in MODES:
        raise MeasurementError("mode must be one of {}, got {!r}".format(MODES, mode))
    return mode


def _check_sigma(noise_sigma):
    noise_sigma = util.get_param('noise_sigma', 4e-4) if noise_sigma is None else float(noise_sigma)
    if noise_sigma < 0:
        raise MeasurementError("noise sigma must be nonnegative, got {}".format(noise_sigma))
    return noise_sigma


def _record(signal, total, noise_sigma, mode, seed, plan):
    """Add detector noise to exact plain readings and convert them to the requested mode."""
    mode = _check_mode(mode)
    noise_sigma = _check_sigma(noise_sigma)
    mean_signal = float(np.mean(signal)) if len(signal) else float(total)
    noise_scale = noise_sigma * abs(mean_signal)

    rng = util.make_rng(seed)
    # readings first, then the total, so a record's noise is fixed by its seed
    eta = rng.normal(0.0, noise_scale, size=len(signal)) if noise_scale > 0 else np.zeros(len(signal))
    eta_total = rng.normal(0.0, noise_scale) if noise_scale > 0 else 0.0

    if mode == PLAIN:
        readings = signal + eta
    else:
        # (<p, X> - <I_v - p, X>) / 2
        readings = signal - total / 2 + eta
    # records keep a nonnegative total, which biases it upward for near-black scenes
    total_reading = max(float(total + eta_total), 0.0)
    logger.debug("measured %d readings (%s, sigma=%g, scale=%g)", len(readings), mode, noise_sigma, noise_scale)
    return MeasurementRecord(np.asarray(readings, dtype=np.float64), total_reading, mode,
                             noise_sigma, noise_scale, plan, seed)


def measure(patterns, x, noise_sigma=None, mode=None, seed=None):
    """Readings of explicit binary patterns (a PatternSet or an m x n array) against a scene."""
    scene = _as_scene(x)
    plan = getattr(patterns, 'plan', None)
    matrix = np.asarray(getattr(patterns, 'patterns', patterns))
    if matrix.ndim != 2 or matrix.shape[1] != scene.n:
        raise MeasurementError("patterns of shape {} do not match a scene of {} pixels".format(
            matrix.shape, scene.n))
    signal = matrix.astype(np.float64) @ scene.flat()
    return _record(signal, float(scene.flat().sum()), noise_sigma, mode, seed, plan)


def measure_plan(plan, x, noise_sigma=None, mode=None, seed=None):
    """Same readings as measure(build_patterns(plan), ...) computed in the transform domain.

    Pattern pairs are affine in their noiselet row, so the exact readings follow
    from one fast transform of the scene instead of m dense inner products.
    """
    scene = _as_scene(x)
    if scene.n != plan.n:
        raise MeasurementError("scene of {} pixels does not match plan size {}".format(scene.n, plan.n))
    order = plan.order
    flat = scene.flat()
    total = float(flat.sum())
    z = noiselet.fnt(ComplexField(flat, np.zeros_like(flat)), order).to_complex()[plan.pair_rows() - 1]
    scale = noiselet.element_scale(order)
    if order.odd:
        first, second = z.real, z.imag
    else:
        first, second = z.real + z.imag, z.real - z.imag
    signal = np.empty(plan.m)
    signal[0::2] = (scale * first + total) / 2
    signal[1::2] = (scale * second + total) / 2
    return _record(signal, total, noise_sigma, mode, seed, plan)


def plain_readings(record):
    """Plain-mode equivalents of a record's readings: y_plain = y_diff + total/2."""
    if record.mode == PLAIN:
        return np.asarray(record.y_tilde, dtype=np.float64)
    if record.mode == DIFFERENTIAL:
        return np.asarray(record.y_tilde, dtype=np.float64) + record.total_intensity / 2
    raise MeasurementError("unknown record mode {!r}".format(record.mode))


def restore_complex(record, plan=None):
    """Complex noiselet measurements Y (length m, plan order) from real readings."""
    if plan is None:
        plan = record.plan
    elif record.plan is not None and record.plan != plan:
        raise MeasurementError("record was taken with a different plan")
    if plan is None:
        raise MeasurementError("restoring a record needs its sampling plan")
    if len(record.y_tilde) != plan.m:
        raise MeasurementError("record holds {} readings, plan expects {}".format(len(record.y_tilde), plan.m))

    y = plain_readings(record)
    total = record.total_intensity
    first, second = y[0::2], y[1::2]
    n = plan.n
    if plan.order.odd:
        upper = (2 * first + 2j * second - (1 + 1j) * total) / np.sqrt(2 * n)
    else:
        upper = ((1 + 1j) * first + (1 - 1j) * second - total) / np.sqrt(n)
    return ComplexField.from_complex(np.concatenate([upper, np.conj(upper)[::-1]]))


def measurement_count(record):
    """Physical readings behind a record: m + 1, doubled in differential mode."""
    count = len(record.y_tilde) + 1
    return 2 * count if record.mode == DIFFERENTIAL else count


def required_measurements(sparsity, n, mu, c=1.0):
    """Advisory measurement count ceil(C * S * ln(n) * mu**2) for S-sparse signals of size n."""
    if sparsity < 1:
        raise MeasurementError("sparsity S must be at least 1, got {}".format(sparsity))
    if n < 2:
        raise MeasurementError("signal size n must be at least 2, got {}".format(n))
    if mu < 1:
        raise MeasurementError("coherence mu must be at least 1, got {}".format(mu))
    if c <= 0:
        raise MeasurementError("constant C must be positive, got {}".format(c))
    return int(np.ceil(c * sparsity * np.log(n) * mu ** 2))


def noise_radius(record):
    """Expected l2 norm of the detector noise carried into the restored measurements."""
    if record.plan is None:
        raise MeasurementError("noise radius needs the record's sampling plan")
    factor = _NOISE_FACTOR[_check_mode(record.mode)]
    return float(record.noise_scale * np.sqrt(factor * len(record.y_tilde) / record.plan.n))


def save_record(record, path):
    """Write a record to a .npz archive; the plan is embedded as YAML text."""
    np.savez(path,
             y_tilde=np.asarray(record.y_tilde, dtype=np.float64),
             total_intensity=np.float64(record.total_intensity),
             mode=np.array(record.mode),
             noise_sigma=np.float64(record.noise_sigma),
             noise_scale=np.float64(record.noise_scale),
             seed=np.int64(-1 if record.seed is None else record.seed),
             plan=np.array('' if record.plan is None else dump_plan(record.plan)))


def load_record(path):
    try:
        with np.load(path, allow_pickle=False) as archive:
            plan_text = str(archive['plan'])
            seed = int(archive['seed'])
            return MeasurementRecord(
                archive['y_tilde'].astype(np.float64),
                float(archive['total_intensity']),
                _check_mode(str(archive['mode'])),
                float(archive['noise_sigma']),
                float(archive['noise_scale']),
                parse_plan(plan_text) if plan_text else None,
                None if seed < 0 else seed)
    except (KeyError, ValueError, EOFError, zipfile.BadZipFile) as e:
        raise StreamFormatError("{} is not a measurement record: {}".format(path, e))
