from datetime import datetime

import numpy as np
import pandas as pd

from noiselet_spc import util


def test_packaged_defaults():
    assert util.get_param('dense_limit') == 4096
    assert util.get_param('frame_planes') == 23
    assert util.get_param('noise_sigma') == 4e-4
    assert util.get_param('no_such_param', 'fallback') == 'fallback'


def test_environment_overrides_defaults(monkeypatch):
    monkeypatch.setenv('NOISELET_SPC_WORKERS', '4')
    monkeypatch.setenv('NOISELET_SPC_MODE', 'differential')
    assert util.get_param('workers') == 4
    assert util.get_param('mode') == 'differential'


def test_rng_is_reproducible():
    a = util.make_rng(42).uniform(size=5)
    b = util.make_rng(42).uniform(size=5)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, util.make_rng(43).uniform(size=5))


def test_timestamp_format():
    assert util.get_timestamp(datetime(2024, 3, 5, 7, 8, 9)) == '2024-03-05_07-08-09'


def test_write_stats_appends_one_header(tmp_path):
    path = str(tmp_path / 'stats.csv')
    util.write_stats(path, [[0.1, 1, 20.0]], ['ratio', 'seed', 'psnr'])
    util.write_stats(path, [[0.1, 2, 22.0], [0.5, 1, 30.0]], ['ratio', 'seed', 'psnr'])
    df = pd.read_csv(path)
    assert list(df.columns) == ['ratio', 'seed', 'psnr']
    assert len(df) == 3


def test_summarize_stats(tmp_path):
    path = str(tmp_path / 'stats.csv')
    util.write_stats(path, [[0.1, 1, 20.0], [0.1, 2, 22.0], [0.5, 1, 30.0]], ['ratio', 'seed', 'psnr'])
    summary = util.summarize_stats(path, 'ratio', 'psnr')
    assert summary['mean'].tolist() == [21.0, 30.0]
    assert summary['count'].tolist() == [2, 1]
    assert summary['std'].iloc[1] == 0.0
