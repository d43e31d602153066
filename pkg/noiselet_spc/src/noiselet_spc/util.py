"""Utility functions."""

import os
from datetime import datetime
from functools import lru_cache

import numpy as np
import pandas as pd
import yaml

ENV_PREFIX = 'NOISELET_SPC_'
_DEFAULTS_PATH = os.path.join(os.path.dirname(__file__), 'config', 'defaults.yaml')


@lru_cache(maxsize=1)
def _load_defaults():
    with open(_DEFAULTS_PATH) as f:
        return yaml.safe_load(f) or {}


def get_param(name, default=None):
    """Return parameter value from the environment (NOISELET_SPC_<NAME>) or the packaged defaults.

    Environment values are parsed as YAML scalars, e.g. NOISELET_SPC_WORKERS=4 gives the int 4.
    """
    env_value = os.environ.get(ENV_PREFIX + name.upper())
    if env_value is not None:
        return yaml.safe_load(env_value)
    return _load_defaults().get(name, default)


def get_timestamp(t=None, format='%Y-%m-%d_%H-%M-%S'):
    """Return timestamp as a string; default: current time, format: YYYY-MM-DD_hh-mm-ss."""
    if t is None:
        t = datetime.now()
    return t.strftime(format)


def make_rng(seed):
    """Return a reproducible counter-based generator (Philox) for the given seed."""
    return np.random.Generator(np.random.Philox(seed))


def write_stats(csv_filename, stats, columns):
    """Append rows of stats to a CSV file, writing the header only once."""
    df_stats = pd.DataFrame(stats, columns=columns)
    df_stats.to_csv(csv_filename, mode='a', index=False, header=not os.path.isfile(csv_filename))
    return df_stats


def summarize_stats(csv_filename, by, column):
    """Return mean, standard deviation and count of a column grouped by another one."""
    df_stats = pd.read_csv(csv_filename)
    summary = df_stats.groupby(by)[column].agg(['mean', 'std', 'count']).reset_index()
    summary['std'] = summary['std'].fillna(0.0)
    return summary
