"""Sample and recover steps shared by the command line and the sweep."""

import logging
import time

from noiselet_spc import util
from noiselet_spc.errors import ReconError
from noiselet_spc.recon.bpdn import ReconConfig, solve_bpdn, solve_full
from noiselet_spc.sensing.patterns import build_patterns
from noiselet_spc.sensing.spc import measure, measure_plan, noise_radius, restore_complex

logger = logging.getLogger(__name__)

AUTO = 'auto'
FULL_CHOICES = (AUTO, 'always', 'never')


def sample(scene, plan, noise_sigma=None, mode=None, seed=None):
    """Measure a scene with the patterns of a plan.

    Up to dense_limit pixels the binary pattern matrix is built and applied;
    beyond that the same readings come from the transform domain.
    """
    if plan.n <= util.get_param('dense_limit', 4096):
        return measure(build_patterns(plan), scene, noise_sigma, mode, seed)
    return measure_plan(plan, scene, noise_sigma, mode, seed)


def resolve_epsilon(epsilon, record):
    """BPDN radius: a number, or 'auto' for the expected noise norm of the record."""
    if epsilon is None or epsilon == AUTO:
        return noise_radius(record) if record.noise_scale > 0 else 0.0
    return float(epsilon)


def recover_record(record, config=None, full=AUTO):
    """Restore Y from a record and reconstruct; returns (image, ReconResult or None, info dict).

    full='auto' takes the direct inverse when the plan is full and the
    resolved radius is zero.
    """
    if full not in FULL_CHOICES:
        raise ReconError("full must be one of {}, got {!r}".format(FULL_CHOICES, full))
    config = config or ReconConfig.from_params()
    plan = record.plan
    y = restore_complex(record)
    start = time.perf_counter()

    direct = full == 'always' or (full == AUTO and plan.is_full and config.epsilon == 0)
    if direct:
        image = solve_full(y, plan)
        result = None
        info = {'method': 'inverse', 'residual': 0.0, 'iterations': 0, 'converged': True}
    else:
        result = solve_bpdn(y, plan, config)
        image = result.image
        info = {'method': 'bpdn', 'residual': result.residual_norm,
                'iterations': result.iterations, 'converged': result.converged}
    info['epsilon'] = config.epsilon
    info['seconds'] = time.perf_counter() - start
    logger.info("recovered %dx%d image via %s in %.3f s", *plan.geometry, info['method'], info['seconds'])
    return image, result, info
