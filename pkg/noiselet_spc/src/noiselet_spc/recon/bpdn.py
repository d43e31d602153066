"""Basis pursuit denoising over Haar coefficients and the direct inverse for full sampling.

solve_bpdn looks for the smallest l1 norm of F subject to
||y - Phi Psi F||_2 <= epsilon. The inner solver is accelerated proximal
gradient (FISTA with adaptive restart) on the penalized problem
0.5 ||R F - b||^2 + lam ||F||_1, where R is the real stacked measurement
operator. The outer loop moves lam along the Pareto curve: it shrinks lam
until the residual first meets epsilon and then bisects (in log scale) for the
largest feasible lam, which has the smallest l1 norm. With epsilon = 0 the
active set of every stage is refit by LSQR so that exactly sparse images are
recovered to the tolerance budget.
"""

import logging
from dataclasses import dataclass, field, fields

import numpy as np
from scipy.sparse.linalg import lsqr

from noiselet_spc import util
from noiselet_spc.errors import ReconError
from noiselet_spc.fields import ComplexField
from noiselet_spc.recon.operator import ActiveSetOperator, MeasurementOperator, forward_op, power_iteration
from noiselet_spc.sensing.spc import SceneImage
from noiselet_spc.transforms import noiselet
from noiselet_spc.transforms.haar import WaveletCoeffs, haar_synthesize, max_levels

logger = logging.getLogger(__name__)

CONTINUATION = 0.1
FEASIBILITY_SLACK = 1e-6
BOUNDARY_SLACK = 1e-2
BRACKET_RATIO = 1 + 1e-3


@dataclass
class ReconConfig:
    epsilon: float = 0.0
    max_iters: int = 5000
    step_tolerance: float = 1e-10
    objective_tolerance: float = 1e-8
    max_outer: int = 40
    inner_iters: int = 400

    def __post_init__(self):
        if self.epsilon < 0:
            raise ReconError("epsilon must be nonnegative, got {}".format(self.epsilon))
        if self.max_iters < 1:
            raise ReconError("max_iters must be at least 1, got {}".format(self.max_iters))
        if self.max_outer < 1 or self.inner_iters < 1:
            raise ReconError("max_outer and inner_iters must be at least 1")

    @classmethod
    def from_params(cls, **overrides):
        """Config from the packaged defaults and environment, then explicit overrides (None is skipped)."""
        values = {f.name: util.get_param(f.name, f.default) for f in fields(cls)}
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


@dataclass
class ReconResult:
    image: SceneImage
    coeffs: WaveletCoeffs
    residual_norm: float
    iterations: int
    converged: bool
    objective_history: list = field(default_factory=list)
    lam: float = 0.0


def soft_threshold(x, thresh):
    """Proximal operator of thresh * ||x||_1."""
    return np.sign(x) * np.maximum(np.abs(x) - thresh, 0.0)


def _fista(op, b, f0, lam, step, iters, step_tolerance):
    """Minimize 0.5 ||op f - b||^2 + lam ||f||_1 from f0; returns (f, iterations used)."""
    f = f0.copy()
    z = f0.copy()
    t = 1.0
    for i in range(iters):
        grad = op.rmatvec(op.matvec(z) - b)
        f_new = soft_threshold(z - step * grad, step * lam)
        t_new = (1 + np.sqrt(1 + 4 * t * t)) / 2
        delta = f_new - f
        # gradient-based restart when momentum points uphill
        if np.dot(z - f_new, delta) > 0:
            t_new = 1.0
            z = f_new
        else:
            z = f_new + ((t - 1) / t_new) * delta
        f, t = f_new, t_new
        if np.linalg.norm(delta) <= step_tolerance * max(1.0, np.linalg.norm(f)):
            return f, i + 1
    return f, iters


def _refit_support(op, b, f, max_rank):
    """Least-squares refit of f on its support; None when the support is empty or too large."""
    support = np.flatnonzero(f)
    if not 0 < len(support) < max_rank:
        return None
    sub = ActiveSetOperator(op, support)
    g = lsqr(sub, b, atol=1e-14, btol=1e-14, iter_lim=max(100, 4 * len(support)))[0]
    refit = np.zeros_like(f)
    refit[support] = g
    return refit


def _result(values, plan, levels, y, iterations, converged, history, lam):
    coeffs = WaveletCoeffs(values.reshape(plan.geometry), levels)
    image = SceneImage(haar_synthesize(coeffs))
    residual = float(np.linalg.norm(y - forward_op(coeffs, plan).to_complex()))
    return ReconResult(image, coeffs, residual, iterations, converged, history, lam)


def solve_bpdn(y, plan, config=None):
    """Recover Haar coefficients F from complex measurements y (length m, plan order)."""
    config = config or ReconConfig.from_params()
    y = y.to_complex() if isinstance(y, ComplexField) else np.asarray(y, dtype=np.complex128)
    if y.shape != (plan.m,):
        raise ReconError("{} measurements do not match plan m = {}".format(y.shape, plan.m))
    levels = max_levels(plan.geometry)
    op = MeasurementOperator(plan, levels)
    b = op.stack(y)
    y_norm = float(np.linalg.norm(b))

    if config.epsilon >= y_norm:
        logger.info("epsilon %.3e >= |y| = %.3e: zero is the minimizer", config.epsilon, y_norm)
        return _result(np.zeros(plan.n), plan, levels, y, 0, True, [0.0], np.inf)

    # a positive epsilon below the floor is searched for but never reported as met
    target = max(config.epsilon, config.objective_tolerance * y_norm)
    floored = 0 < config.epsilon < target
    step = 1.0 / power_iteration(op) ** 2
    refit = config.epsilon == 0

    lam_hi = float(np.max(np.abs(op.rmatvec(b))))
    lam_lo = None
    lam = lam_hi * CONTINUATION
    f = np.zeros(plan.n)
    best, best_l1 = None, np.inf
    closest, closest_res = f, y_norm
    history = []
    iterations = 0
    converged = False

    for outer in range(config.max_outer):
        budget = min(config.inner_iters, config.max_iters - iterations)
        if budget <= 0:
            break
        f, used = _fista(op, b, f, lam, step, budget, config.step_tolerance)
        iterations += used
        res = float(np.linalg.norm(op.matvec(f) - b))
        if refit:
            g = _refit_support(op, b, f, plan.m)
            if g is not None:
                res_g = float(np.linalg.norm(op.matvec(g) - b))
                if res_g < res:
                    f, res = g, res_g

        feasible = res <= target * (1 + FEASIBILITY_SLACK)
        l1 = float(np.sum(np.abs(f)))
        if feasible and l1 < best_l1:
            best, best_l1 = f.copy(), l1
        if not feasible and res < closest_res:
            closest, closest_res = f.copy(), res
        if best is not None:
            history.append(best_l1)
        logger.debug("outer %d: lam=%.3e residual=%.3e target=%.3e l1=%.6e iters=%d",
                     outer, lam, res, target, l1, iterations)

        if feasible:
            lam_lo = lam
            at_boundary = res >= target * (1 - BOUNDARY_SLACK)
            if refit or at_boundary or lam_hi / lam_lo < BRACKET_RATIO:
                converged = True
                break
        else:
            lam_hi = lam
            if lam_lo is not None and lam_hi / lam_lo < BRACKET_RATIO:
                converged = True
                break
        lam = lam * CONTINUATION if lam_lo is None else float(np.sqrt(lam_lo * lam_hi))

    if best is None:
        logger.warning("BPDN did not reach residual %.3e within %d iterations (best %.3e)",
                       target, iterations, closest_res)
        return _result(closest, plan, levels, y, iterations, False, history, lam)
    if converged and floored:
        logger.warning("BPDN residual floor %.3e is above epsilon %.3e", target, config.epsilon)
        converged = False
    elif not converged:
        logger.warning("BPDN stopped after %d iterations before the weight search settled", iterations)
    logger.info("BPDN: residual target %.3e, l1 %.6e, %d iterations", target, best_l1, iterations)
    return _result(best, plan, levels, y, iterations, converged, history, lam_lo)


def solve_full(y, plan):
    """Direct inverse N^H y for a full-sampling plan."""
    if not plan.is_full:
        raise ReconError("direct inverse needs a full-sampling plan (m = n), got m = {}".format(plan.m))
    y = y.to_complex() if isinstance(y, ComplexField) else np.asarray(y, dtype=np.complex128)
    if y.shape != (plan.n,):
        raise ReconError("{} measurements do not match plan size {}".format(y.shape, plan.n))
    full = np.zeros(plan.n, dtype=np.complex128)
    full[plan.row_indices() - 1] = y
    x = noiselet.fnt(ComplexField.from_complex(full), plan.order, noiselet.INVERSE)
    return SceneImage(x.re.reshape(plan.geometry))
