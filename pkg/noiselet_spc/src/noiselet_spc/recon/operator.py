"""Measurement operator Phi * Psi: Haar synthesis, fast noiselet transform, plan row selection.

The operator is never materialized. On the solver side it acts on the real
coefficient vector F (row-major Mallat layout) and returns the real and
imaginary parts of the m complex measurements stacked into one real vector of
length 2m.
"""

import logging

import numpy as np
from scipy.sparse.linalg import LinearOperator

from noiselet_spc import util
from noiselet_spc.errors import ReconError
from noiselet_spc.fields import ComplexField
from noiselet_spc.transforms import noiselet
from noiselet_spc.transforms.haar import WaveletCoeffs, haar_analyze, haar_synthesize, max_levels

logger = logging.getLogger(__name__)


def _coeff_values(f, plan):
    values = f.values if isinstance(f, WaveletCoeffs) else np.asarray(f)
    if values.size != plan.n:
        raise ReconError("{} coefficients do not match plan size {}".format(values.size, plan.n))
    return np.reshape(values, plan.geometry)


def _levels(f, plan):
    return f.levels if isinstance(f, WaveletCoeffs) else max_levels(plan.geometry)


def _sample(image, plan):
    """Plan rows of N_n applied to the row-major flattened image (complex allowed)."""
    flat = ComplexField.from_complex(np.ravel(image))
    return noiselet.fnt(flat, plan.order).to_complex()[plan.row_indices() - 1]


def _embed_adjoint(y, plan):
    """N_n^H S^T y as an image: measurements placed at their rows, inverse transform."""
    full = np.zeros(plan.n, dtype=np.complex128)
    full[plan.row_indices() - 1] = y
    out = noiselet.fnt(ComplexField.from_complex(full), plan.order, noiselet.INVERSE).to_complex()
    return out.reshape(plan.geometry)


def forward_op(f, plan):
    """Phi * Psi * F for real Haar coefficients F; returns the m complex measurements."""
    x = haar_synthesize(WaveletCoeffs(_coeff_values(f, plan), _levels(f, plan)))
    return ComplexField.from_complex(_sample(x, plan))


def adjoint_op(y, plan, levels=None):
    """Complex adjoint Psi^T * Phi^H * y, returned as coefficients of the image geometry."""
    y = y.to_complex() if isinstance(y, ComplexField) else np.asarray(y, dtype=np.complex128)
    if y.shape != (plan.m,):
        raise ReconError("{} measurements do not match plan m = {}".format(y.shape, plan.m))
    levels = max_levels(plan.geometry) if levels is None else levels
    image = _embed_adjoint(y, plan)
    return ComplexField(haar_analyze(image.real, levels).values, haar_analyze(image.imag, levels).values)


class MeasurementOperator(LinearOperator):
    """Real operator R: F -> [Re(Phi Psi F); Im(Phi Psi F)] of shape (2m, n)."""

    def __init__(self, plan, levels=None):
        self.plan = plan
        self.levels = max_levels(plan.geometry) if levels is None else levels
        super().__init__(dtype=np.float64, shape=(2 * plan.m, plan.n))

    def _matvec(self, f):
        x = haar_synthesize(WaveletCoeffs(np.reshape(f, self.plan.geometry), self.levels))
        z = _sample(x, self.plan)
        return np.concatenate([z.real, z.imag])

    def _rmatvec(self, r):
        r = np.ravel(r)
        m = self.plan.m
        image = _embed_adjoint(r[:m] + 1j * r[m:], self.plan)
        # F is real, so only the real part of the complex adjoint pairs with R
        return haar_analyze(image.real, self.levels).values.ravel()

    def stack(self, y):
        """Real stacked form [Re y; Im y] of complex measurements."""
        y = y.to_complex() if isinstance(y, ComplexField) else np.asarray(y, dtype=np.complex128)
        return np.concatenate([y.real, y.imag])


class ActiveSetOperator(LinearOperator):
    """R restricted to the columns in an index set, for least-squares refits of a support."""

    def __init__(self, op, support):
        self.op = op
        self.support = np.asarray(support)
        super().__init__(dtype=op.dtype, shape=(op.shape[0], len(self.support)))

    def _matvec(self, x):
        f = np.zeros(self.op.shape[1])
        f[self.support] = np.ravel(x)
        return self.op.matvec(f)

    def _rmatvec(self, r):
        return self.op.rmatvec(r)[self.support]


def power_iteration(op, iters=None, tol=None, seed=0):
    """Estimate the largest singular value of op by power iteration on op^T op."""
    iters = iters or util.get_param('power_iterations', 20)
    tol = tol or util.get_param('power_tolerance', 1e-6)
    x = util.make_rng(seed).standard_normal(op.shape[1])
    x /= np.linalg.norm(x)
    eig = 0.0
    for i in range(iters):
        y = op.rmatvec(op.matvec(x))
        eig_new = float(np.linalg.norm(y))
        if eig_new == 0:
            return 0.0
        x = y / eig_new
        converged = abs(eig_new - eig) <= tol * eig_new
        eig = eig_new
        if converged:
            break
    logger.debug("power iteration: |R|^2 ~ %.6f after %d iterations", eig, i + 1)
    return float(np.sqrt(eig))
