"""PSNR as a function of the sampling ratio, over seeded random plans."""

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

from noiselet_spc import util
from noiselet_spc.errors import ImageFormatError, PlanError
from noiselet_spc.experiments.base_experiment import BaseExperiment
from noiselet_spc.experiments.pipeline import AUTO, recover_record, resolve_epsilon, sample
from noiselet_spc.fields import is_power_of_two
from noiselet_spc.imageio import load_pgm
from noiselet_spc.recon.bpdn import ReconConfig
from noiselet_spc.recon.metrics import psnr
from noiselet_spc.scenes import natural_image, sparse_phantom
from noiselet_spc.sensing.plan import plan_from_ratio

logger = logging.getLogger(__name__)

SCENE_FILE = 'file'
SCENE_NATURAL = 'natural'
SCENE_PHANTOM = 'phantom'


@dataclass
class ExperimentSpec:
    """Everything a sweep needs; ratios x seeds cells are run independently."""

    geometry: tuple = (256, 256)
    ratios: list = field(default_factory=lambda: [0.1, 0.3, 0.5, 1.0])
    seeds: list = field(default_factory=lambda: list(range(5)))
    noise_sigma: float = None
    mode: str = None
    epsilon: object = AUTO
    recon: ReconConfig = None
    out_dir: str = None
    scene: str = SCENE_NATURAL
    image: str = None
    center_crop: bool = False
    phantom_fraction: float = 0.05
    phantom_seed: int = 0
    register: bool = True
    full: str = AUTO
    workers: int = 1

    def __post_init__(self):
        self.geometry = tuple(int(s) for s in self.geometry)
        if len(self.geometry) != 2 or not all(is_power_of_two(s) for s in self.geometry):
            raise ImageFormatError("geometry {} must be two powers of two".format(self.geometry))
        if not self.ratios or any(not 0 < r <= 1 for r in self.ratios):
            raise PlanError("sampling ratios must lie in (0, 1], got {}".format(self.ratios))
        if self.scene not in (SCENE_FILE, SCENE_NATURAL, SCENE_PHANTOM):
            raise ValueError("unknown scene kind {!r}".format(self.scene))
        if self.scene == SCENE_FILE and not self.image:
            raise ImageFormatError("a file scene needs an image path")
        self.recon = self.recon or ReconConfig.from_params()

    def load_scene(self):
        if self.scene == SCENE_FILE:
            scene = load_pgm(self.image, self.center_crop)
            self.geometry = scene.geometry
            return scene
        if self.scene == SCENE_PHANTOM:
            return sparse_phantom(self.geometry, self.phantom_fraction, self.phantom_seed)
        return natural_image(self.geometry)


class SweepExperiment(BaseExperiment):
    """Sample and recover one scene for every (ratio, seed) cell; summarize PSNR per ratio."""

    stats_columns = ['ratio', 'm', 'seed', 'psnr', 'residual', 'iterations', 'converged', 'seconds']

    def __init__(self, spec):
        super().__init__(spec.out_dir)
        self.spec = spec
        self.scene = spec.load_scene()
        self.summary_filename = os.path.join(self.out_dir, "sweep_summary_{}.csv".format(self.timestamp))

    @property
    def name(self):
        return 'sweep_cells'

    def cells(self):
        return [(ratio, seed) for ratio in self.spec.ratios for seed in self.spec.seeds]

    def run_cell(self, cell):
        ratio, seed = cell
        spec = self.spec
        plan = plan_from_ratio(self.scene.geometry, ratio, seed)
        # the noise stream must not replay the plan stream
        record = sample(self.scene, plan, spec.noise_sigma, spec.mode, seed + 1)
        config = replace(spec.recon, epsilon=resolve_epsilon(spec.epsilon, record))
        image, _, info = recover_record(record, config, spec.full)
        score = psnr(image, self.scene, spec.register)
        logger.info("ratio %.3f seed %d: m=%d PSNR %.2f dB", ratio, seed, plan.m, score)
        return [ratio, plan.m, seed, score, info['residual'], info['iterations'],
                info['converged'], info['seconds']]

    def run(self):
        """Run every cell (in worker processes when workers > 1); returns the per-ratio summary."""
        cells = self.cells()
        workers = max(1, int(self.spec.workers or 1))
        logger.info("sweep: %d cells on %d worker(s)", len(cells), workers)
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as executor:
                rows = list(executor.map(self.run_cell, cells))
        else:
            rows = [self.run_cell(cell) for cell in cells]
        self.write_stats(rows)

        summary = util.summarize_stats(self.stats_filename, 'ratio', 'psnr')
        summary = summary.rename(columns={'mean': 'mean_psnr', 'std': 'std_psnr'})
        summary.to_csv(self.summary_filename, index=False)
        return summary


def run_sweep(spec):
    """Run a sweep; returns (summary DataFrame, summary CSV path, cells CSV path)."""
    experiment = SweepExperiment(spec)
    summary = experiment.run()
    return summary, experiment.summary_filename, experiment.stats_filename
