import re

import numpy as np
import pandas as pd
import pytest

from noiselet_spc import cli
from noiselet_spc.imageio import save_pgm
from noiselet_spc.sensing.bundle import read_bundle_stream
from noiselet_spc.sensing.plan import load_plan
from noiselet_spc.sensing.spc import load_record

from conftest import random_image


def run(*argv):
    return cli.main(['--log-level', 'WARNING'] + [str(a) for a in argv])


@pytest.fixture
def reference(tmp_path):
    path = str(tmp_path / 'reference.pgm')
    save_pgm(random_image((16, 16), seed=11), path, bits=16)
    return path


def test_patterns_writes_stream_and_plan(tmp_path, capsys):
    out, plan_out = tmp_path / 'p.bin', tmp_path / 'plan.yaml'
    assert run('patterns', '--q', 6, '--m', 32, '--seed', 1, '--out', out, '--plan-out', plan_out) == 0
    assert re.search(r'bundles/s: \d+\.\d\d, patterns/s: \d+\.\d\d', capsys.readouterr().out)
    bundles = read_bundle_stream(str(out))
    assert [b.count for b in bundles] == [23, 9]
    plan = load_plan(str(plan_out))
    assert (plan.m, plan.seed, plan.geometry) == (32, 1, (8, 8))


def test_patterns_are_reproducible(tmp_path):
    a, b = tmp_path / 'a.bin', tmp_path / 'b.bin'
    assert run('patterns', '--geometry', '16x8', '--ratio', 0.25, '--seed', 3, '--out', a) == 0
    assert run('patterns', '--geometry', '16x8', '--ratio', 0.25, '--seed', 3, '--out', b) == 0
    assert a.read_bytes() == b.read_bytes()
    assert read_bundle_stream(str(a))[0].geometry == (16, 8)


def test_noiseless_full_sampling_round_trip(tmp_path, reference, capsys):
    record, image = tmp_path / 'r.npz', tmp_path / 'out.pgm'
    assert run('sample', '--image', reference, '--ratio', 1.0, '--sigma', 0, '--out', record) == 0
    assert 'measurements: 257 (256 patterns, plain mode)' in capsys.readouterr().out
    assert run('recover', '--record', record, '--reference', reference, '--out', image) == 0
    text = capsys.readouterr().out
    score = float(re.search(r'PSNR: (\S+) dB', text).group(1))
    assert score > 90
    metrics = pd.read_csv(tmp_path / 'out_metrics.csv')
    assert metrics['method'].tolist() == ['inverse']
    assert 'psnr' in metrics.columns


def test_differential_sampling_counts(tmp_path, capsys):
    record = tmp_path / 'd.npz'
    assert run('sample', '--phantom', 0.1, '--geometry', '16x16', '--m', 256, '--mode', 'differential',
               '--sigma', 0, '--seed', 5, '--out', record) == 0
    assert 'measurements: 514 (256 patterns, differential mode)' in capsys.readouterr().out
    loaded = load_record(str(record))
    assert loaded.mode == 'differential'
    assert loaded.plan.seed == 5
    assert loaded.seed == 6


def test_recover_without_reference(tmp_path, capsys):
    record, image, metrics = tmp_path / 'r.npz', tmp_path / 'x.pgm', tmp_path / 'm.csv'
    assert run('sample', '--phantom', 0.1, '--geometry', '16x16', '--ratio', 0.5, '--sigma', 1e-4,
               '--out', record) == 0
    assert run('recover', '--record', record, '--bits', 8, '--metrics', metrics, '--out', image) == 0
    assert 'PSNR' not in capsys.readouterr().out
    stats = pd.read_csv(metrics)
    assert 'psnr' not in stats.columns
    assert stats['method'].tolist() == ['bpdn']
    assert image.exists()


def test_plan_file_must_match_scene(tmp_path, reference, capsys):
    plan = tmp_path / 'plan.yaml'
    assert run('patterns', '--q', 6, '--m', 8, '--out', tmp_path / 'p.bin', '--plan-out', plan) == 0
    assert run('sample', '--image', reference, '--plan', plan, '--out', tmp_path / 'r.npz') == 1
    assert 'noiselet-spc: error:' in capsys.readouterr().err


def test_corrupt_record(tmp_path, capsys):
    record = tmp_path / 'bad.npz'
    record.write_bytes(b'garbage')
    assert run('recover', '--record', record, '--out', tmp_path / 'x.pgm') == 1
    assert capsys.readouterr().err.startswith('noiselet-spc: error:')


def test_non_power_of_two_image(tmp_path, capsys):
    path = str(tmp_path / 'odd.pgm')
    save_pgm(random_image((20, 24), seed=1), path)
    assert run('sample', '--image', path, '--out', tmp_path / 'r.npz') == 1
    assert 'powers of two' in capsys.readouterr().err
    assert run('sample', '--image', path, '--center-crop', '--out', tmp_path / 'r.npz') == 0
    assert load_record(str(tmp_path / 'r.npz')).plan.geometry == (16, 16)


def test_usage_errors_exit_with_2(tmp_path):
    with pytest.raises(SystemExit) as e:
        run('patterns', '--q', 4)
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        run('patterns', '--q', 4, '--m', 4, '--geometry', 'axb', '--out', tmp_path / 'p.bin')
    assert e.value.code == 2


def test_selftest(capsys):
    assert run('selftest', '--max-q', 4) == 0
    out = capsys.readouterr().out
    assert 'FAIL' not in out
    assert out.strip().endswith('all checks passed')


def test_small_phantom_sweep(tmp_path, capsys):
    out = tmp_path / 'sweep'
    assert run('sweep', '--phantom', 0.1, '--geometry', '16x16', '--ratios', '1.0', '--seeds', '0,1',
               '--sigma', 0, '--out', out) == 0
    cells = list(out.glob('sweep_cells_*.csv'))
    summaries = list(out.glob('sweep_summary_*.csv'))
    assert len(cells) == len(summaries) == 1
    assert len(pd.read_csv(cells[0])) == 2
    summary = pd.read_csv(summaries[0])
    assert summary['ratio'].tolist() == [1.0]
    assert np.isinf(summary['mean_psnr'].iloc[0])
    assert summary['std_psnr'].iloc[0] == 0.0
    assert 'table:' in capsys.readouterr().out


def test_bad_phantom_fraction(tmp_path, capsys):
    assert run('sample', '--phantom', 0, '--geometry', '16x16', '--out', tmp_path / 'r.npz') == 1
    err = capsys.readouterr().err
    assert err.startswith('noiselet-spc: error:')
    assert 'Traceback' not in err


def test_sweep_psnr_grows_with_ratio(tmp_path):
    out = tmp_path / 'sweep'
    assert run('sweep', '--phantom', 0.05, '--geometry', '16x16', '--ratios', '0.1,0.3,1.0', '--seeds', '0,1',
               '--sigma', 0, '--out', out) == 0
    summary = pd.read_csv(next(out.glob('sweep_summary_*.csv')))
    assert summary['ratio'].tolist() == [0.1, 0.3, 1.0]
    mean = summary['mean_psnr'].tolist()
    assert all(mean[i + 1] >= mean[i] for i in range(len(mean) - 1))
