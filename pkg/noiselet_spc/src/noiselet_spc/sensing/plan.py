"""Sampling plans: the ordered, mirror-paired selection of noiselet rows that forms the sensing matrix."""

import logging
from dataclasses import dataclass

import numpy as np
import yaml

from noiselet_spc import util
from noiselet_spc.errors import PlanError, SizeError
from noiselet_spc.fields import NoiseletOrder, log2_exact

logger = logging.getLogger(__name__)


def default_geometry(order):
    """rows x cols covering n = 2**q pixels, as square as possible."""
    rows = 1 << (order.q // 2)
    return rows, order.n // rows


@dataclass(frozen=True)
class SamplingPlan:
    """m/2 upper-half noiselet rows plus their m/2 mirror rows.

    Plan position j (1 <= j <= m/2) holds upper_rows[j-1] and position m+1-j holds
    its mirror n+1-upper_rows[j-1], so phi_j = conj(phi_(m+1-j)). All row numbers
    are 1-based rows of the 1D matrix N_n acting on the row-major flattened image.
    """

    order: NoiseletOrder
    geometry: tuple
    m: int
    upper_rows: tuple
    seed: int = None

    def __post_init__(self):
        object.__setattr__(self, 'geometry', tuple(int(s) for s in self.geometry))
        object.__setattr__(self, 'upper_rows', tuple(int(k) for k in self.upper_rows))
        rows, cols = self.geometry
        try:
            if log2_exact(rows) + log2_exact(cols) != self.order.q:
                raise PlanError("geometry {}x{} does not hold n = {} pixels".format(rows, cols, self.order.n))
        except SizeError as e:
            raise PlanError(str(e))
        _check_m(self.m, self.order.n)
        if len(self.upper_rows) != self.m // 2:
            raise PlanError("plan with m = {} needs {} upper rows, got {}".format(
                self.m, self.m // 2, len(self.upper_rows)))
        if len(set(self.upper_rows)) != len(self.upper_rows):
            raise PlanError("upper rows must be distinct")
        half = self.order.n // 2
        if any(not 1 <= k <= half for k in self.upper_rows):
            raise PlanError("upper rows must lie in 1..{}".format(half))

    @property
    def n(self):
        return self.order.n

    @property
    def is_full(self):
        return self.m == self.order.n

    @property
    def ratio(self):
        return self.m / self.order.n

    def pair_rows(self):
        """1-based noiselet rows of plan positions 1..m/2."""
        return np.array(self.upper_rows, dtype=np.int64)

    def row_indices(self):
        """1-based noiselet rows of all m plan positions, in sensing-matrix order."""
        upper = self.pair_rows()
        return np.concatenate([upper, (self.order.n + 1 - upper)[::-1]])

    def to_dict(self):
        return {
            'q': self.order.q,
            'geometry': list(self.geometry),
            'm': self.m,
            'upper_rows': list(self.upper_rows),
            'seed': self.seed,
        }

    @classmethod
    def from_dict(cls, d):
        try:
            return cls(NoiseletOrder(int(d['q'])), tuple(d['geometry']), int(d['m']),
                       tuple(d['upper_rows']), d.get('seed'))
        except (KeyError, TypeError) as e:
            raise PlanError("malformed plan document: {}".format(e))


def _check_m(m, n):
    if m % 2:
        raise PlanError("measurement count m = {} must be even".format(m))
    if not 2 <= m <= n:
        raise PlanError("measurement count m = {} outside 2..{}".format(m, n))


def make_plan(order, m, seed, geometry=None):
    """Draw m/2 distinct upper-half rows uniformly without replacement; deterministic for a seed."""
    order = order if isinstance(order, NoiseletOrder) else NoiseletOrder(order)
    _check_m(m, order.n)
    rng = util.make_rng(seed)
    upper = rng.choice(order.n // 2, size=m // 2, replace=False) + 1
    plan = SamplingPlan(order, geometry or default_geometry(order), m, tuple(upper.tolist()), seed)
    logger.debug("plan q=%d m=%d seed=%s", order.q, m, seed)
    return plan


def round_even(ratio, n):
    """Nearest even measurement count to ratio*n, kept within 2..n."""
    if not 0 < ratio <= 1:
        raise PlanError("sampling ratio {} outside (0, 1]".format(ratio))
    m = 2 * int(np.floor(ratio * n / 2 + 0.5))
    return int(min(max(m, 2), n))


def plan_from_ratio(geometry, ratio, seed):
    """Plan for an image geometry at sampling ratio m/n."""
    order = NoiseletOrder.from_shape(geometry)
    return make_plan(order, round_even(ratio, order.n), seed, geometry)


def save_plan(plan, path):
    with open(path, 'w') as f:
        yaml.safe_dump(plan.to_dict(), f, default_flow_style=None, sort_keys=False)


def load_plan(path):
    with open(path) as f:
        return SamplingPlan.from_dict(yaml.safe_load(f))


def dump_plan(plan):
    return yaml.safe_dump(plan.to_dict(), default_flow_style=None, sort_keys=False)


def parse_plan(text):
    return SamplingPlan.from_dict(yaml.safe_load(text))
