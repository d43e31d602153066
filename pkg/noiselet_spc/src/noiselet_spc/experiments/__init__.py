from noiselet_spc.experiments.base_experiment import BaseExperiment
from noiselet_spc.experiments.sweep import ExperimentSpec, SweepExperiment, run_sweep
