"""Command-line front end: patterns, sample, recover, sweep and selftest."""

import argparse
import logging
import os
import sys
import time

import numpy as np

from noiselet_spc import __version__, util
from noiselet_spc.errors import NoiseletSpcError, PlanError
from noiselet_spc.experiments.pipeline import AUTO, FULL_CHOICES, recover_record, resolve_epsilon, sample
from noiselet_spc.experiments.sweep import SCENE_FILE, SCENE_NATURAL, SCENE_PHANTOM, ExperimentSpec, run_sweep
from noiselet_spc.fields import ComplexField, NoiseletOrder
from noiselet_spc.imageio import load_pgm, save_pgm
from noiselet_spc.recon.bpdn import ReconConfig
from noiselet_spc.recon.metrics import psnr
from noiselet_spc.scenes import natural_image, sparse_phantom
from noiselet_spc.sensing import bundle, patterns, plan as plans, spc
from noiselet_spc.transforms import noiselet

logger = logging.getLogger(__name__)

PROG = 'noiselet-spc'


def parse_geometry(text):
    """'256x128' -> (256, 128)."""
    try:
        rows, cols = (int(s) for s in text.lower().split('x'))
    except ValueError:
        raise argparse.ArgumentTypeError("geometry must look like 256x256, got {!r}".format(text))
    return rows, cols


def parse_list(cast):
    def parse(text):
        try:
            return [cast(s) for s in text.split(',') if s.strip()]
        except ValueError:
            raise argparse.ArgumentTypeError("expected a comma-separated list, got {!r}".format(text))
    return parse


def parse_epsilon(text):
    if text == AUTO:
        return AUTO
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError("epsilon must be a number or 'auto', got {!r}".format(text))


def _add_scene_args(parser):
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument('--image', help="grayscale PGM scene")
    source.add_argument('--natural', action='store_true', help="built-in natural test image")
    source.add_argument('--phantom', type=float, metavar='FRACTION',
                        help="sparse Haar phantom with this fraction of nonzero coefficients")
    parser.add_argument('--geometry', type=parse_geometry, default=(256, 256),
                        help="rows x cols for built-in scenes (default: 256x256)")
    parser.add_argument('--center-crop', action='store_true',
                        help="crop images with non-power-of-two sides to the largest fitting size")
    parser.add_argument('--phantom-seed', type=int, default=0)


def _add_noise_args(parser):
    parser.add_argument('--sigma', type=float, default=None,
                        help="noise std relative to the mean signal (default: {})".format(
                            util.get_param('noise_sigma')))
    parser.add_argument('--mode', choices=spc.MODES, default=None,
                        help="measurement mode (default: {})".format(util.get_param('mode')))


def _add_recon_args(parser):
    parser.add_argument('--epsilon', type=parse_epsilon, default=AUTO,
                        help="BPDN radius, or 'auto' for the expected noise norm (default)")
    parser.add_argument('--max-iters', type=int, default=None)
    parser.add_argument('--full', choices=FULL_CHOICES, default=AUTO,
                        help="direct inverse for full sampling: auto (noiseless only), always, never")


def build_parser():
    parser = argparse.ArgumentParser(prog=PROG, description="Noiselet-based compressive single-pixel imaging.")
    parser.add_argument('--version', action='version', version='%(prog)s ' + __version__)
    parser.add_argument('--log-level', default=util.get_param('log_level', 'INFO'))
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('patterns', help="write the packed bundle stream of a plan")
    size = p.add_mutually_exclusive_group(required=True)
    size.add_argument('--q', type=int, help="transform order, n = 2**q pixels")
    size.add_argument('--geometry', type=parse_geometry)
    count = p.add_mutually_exclusive_group(required=True)
    count.add_argument('--m', type=int, help="even number of patterns")
    count.add_argument('--ratio', type=float, help="sampling ratio m/n")
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--planes', type=int, default=util.get_param('frame_planes', 23),
                   help="payload planes per frame")
    p.add_argument('--plan-out', help="also save the plan as YAML")
    p.add_argument('--out', required=True, help="bundle stream file")
    p.set_defaults(func=cmd_patterns)

    p = sub.add_parser('sample', help="simulate the detector and write a measurement record")
    _add_scene_args(p)
    p.add_argument('--plan', help="YAML plan to use instead of drawing one")
    count = p.add_mutually_exclusive_group()
    count.add_argument('--m', type=int)
    count.add_argument('--ratio', type=float, default=0.5)
    p.add_argument('--seed', type=int, default=0, help="plan seed")
    p.add_argument('--noise-seed', type=int, default=None, help="default: plan seed + 1")
    _add_noise_args(p)
    p.add_argument('--out', required=True, help="record file (.npz)")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser('recover', help="reconstruct an image from a measurement record")
    p.add_argument('--record', required=True)
    _add_recon_args(p)
    p.add_argument('--reference', help="PGM reference image for PSNR")
    p.add_argument('--register', action=argparse.BooleanOptionalAction, default=True,
                   help="fit gain and offset to the reference before PSNR")
    p.add_argument('--bits', type=int, choices=(8, 16), default=16)
    p.add_argument('--metrics', help="CSV file to append metrics to (default: next to --out)")
    p.add_argument('--out', required=True, help="output PGM image")
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser('sweep', help="PSNR versus sampling ratio over seeded plans")
    _add_scene_args(p)
    p.add_argument('--ratios', type=parse_list(float), default=[0.1, 0.2, 0.3, 0.5, 0.7, 1.0])
    p.add_argument('--seeds', type=parse_list(int), default=None)
    p.add_argument('--repetitions', type=int, default=5, help="plans per ratio when --seeds is absent")
    p.add_argument('--seed', type=int, default=0, help="first seed when --seeds is absent")
    _add_noise_args(p)
    _add_recon_args(p)
    p.add_argument('--register', action=argparse.BooleanOptionalAction, default=True)
    p.add_argument('--workers', type=int, default=None,
                   help="worker processes (default: NOISELET_SPC_WORKERS or {})".format(
                       util.get_param('workers', 1)))
    p.add_argument('--out', default=util.get_param('out', 'out'), help="output directory")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser('selftest', help="quick oracle checks at small sizes")
    p.add_argument('--max-q', type=int, default=6)
    p.set_defaults(func=cmd_selftest)
    return parser


def _scene_from_args(args):
    if args.image:
        return load_pgm(args.image, args.center_crop)
    if args.phantom is not None:
        return sparse_phantom(args.geometry, args.phantom, args.phantom_seed)
    return natural_image(args.geometry)


def _recon_config(args, record):
    return ReconConfig.from_params(epsilon=resolve_epsilon(args.epsilon, record), max_iters=args.max_iters)


def cmd_patterns(args):
    order = NoiseletOrder(args.q) if args.q is not None else NoiseletOrder.from_shape(args.geometry)
    geometry = args.geometry or plans.default_geometry(order)
    m = args.m if args.m is not None else plans.round_even(args.ratio, order.n)
    plan = plans.make_plan(order, m, args.seed, geometry)
    if args.plan_out:
        plans.save_plan(plan, args.plan_out)

    start = time.perf_counter()
    bundles = patterns.bundles_for_plan(plan, args.planes)
    elapsed = max(time.perf_counter() - start, 1e-9)
    bundle.write_bundle_stream(bundles, args.out)
    logger.info("wrote %d frames for m=%d to %s", len(bundles), plan.m, args.out)
    print("bundles/s: {:.2f}, patterns/s: {:.2f}".format(len(bundles) / elapsed, plan.m / elapsed))
    return 0


def cmd_sample(args):
    scene = _scene_from_args(args)
    if args.plan:
        plan = plans.load_plan(args.plan)
        if tuple(plan.geometry) != tuple(scene.geometry):
            raise PlanError("plan geometry {} does not match the {}x{} scene".format(
                plan.geometry, *scene.geometry))
    elif args.m is not None:
        plan = plans.make_plan(scene.order, args.m, args.seed, scene.geometry)
    else:
        plan = plans.plan_from_ratio(scene.geometry, args.ratio, args.seed)
    noise_seed = args.seed + 1 if args.noise_seed is None else args.noise_seed
    record = sample(scene, plan, args.sigma, args.mode, noise_seed)
    spc.save_record(record, args.out)
    print("measurements: {} ({} patterns, {} mode)".format(
        spc.measurement_count(record), plan.m, record.mode))
    return 0


def cmd_recover(args):
    record = spc.load_record(args.record)
    if record.plan is None:
        raise PlanError("record {} carries no sampling plan".format(args.record))
    config = _recon_config(args, record)
    image, _, info = recover_record(record, config, args.full)
    save_pgm(image, args.out, args.bits)

    stats = {'record': args.record, 'method': info['method'], 'epsilon': info['epsilon'],
             'residual': info['residual'], 'iterations': info['iterations'],
             'converged': info['converged'], 'seconds': info['seconds']}
    if args.reference:
        stats['psnr'] = psnr(image, load_pgm(args.reference), args.register)
        print("PSNR: {:.2f} dB".format(stats['psnr']))
    metrics = args.metrics or os.path.splitext(args.out)[0] + '_metrics.csv'
    util.write_stats(metrics, [list(stats.values())], list(stats))
    return 0


def cmd_sweep(args):
    if args.image:
        scene, image = SCENE_FILE, args.image
    else:
        scene, image = (SCENE_PHANTOM if args.phantom is not None else SCENE_NATURAL), None
    seeds = args.seeds or list(range(args.seed, args.seed + args.repetitions))
    spec = ExperimentSpec(
        geometry=args.geometry, ratios=args.ratios, seeds=seeds,
        noise_sigma=args.sigma, mode=args.mode, epsilon=args.epsilon,
        recon=ReconConfig.from_params(max_iters=args.max_iters), out_dir=args.out,
        scene=scene, image=image, center_crop=args.center_crop,
        phantom_fraction=args.phantom if args.phantom is not None else 0.05,
        phantom_seed=args.phantom_seed, register=args.register, full=args.full,
        workers=args.workers or util.get_param('workers', 1))
    summary, summary_path, cells_path = run_sweep(spec)
    print(summary.to_string(index=False))
    print("table: {}\ncells: {}".format(summary_path, cells_path))
    return 0


def _selftest_checks(max_q):
    """Yield (name, passed, detail) for each oracle check."""
    for q in range(1, max_q + 1):
        order = NoiseletOrder(q)
        dense = noiselet.dense_noiselet(order).to_complex()
        identity = ComplexField.from_complex(np.eye(order.n))
        fast = np.array([noiselet.fnt(identity[:, k], order).to_complex() for k in range(order.n)]).T
        error = float(np.max(np.abs(fast - dense)))
        yield "fnt q={}".format(q), error < 1e-10, error

        error = noiselet.verify_modified_relation(order)
        yield "modified relation q={}".format(q), error < 1e-12, error

        plan = plans.make_plan(order, order.n, seed=q)
        same = np.array_equal(patterns.fast_patterns(plan).patterns, patterns.build_patterns(plan).patterns)
        yield "pattern equivalence q={}".format(q), same, None

        rng = util.make_rng(q)
        x = rng.uniform(size=plans.default_geometry(order))
        half = plans.make_plan(order, max(2, order.n // 2), seed=q)
        record = spc.measure(patterns.build_patterns(half), x, noise_sigma=0.0, mode=spc.PLAIN)
        expected = dense[half.row_indices() - 1] @ x.ravel()
        error = float(np.max(np.abs(spc.restore_complex(record).to_complex() - expected)))
        yield "m+1 restore q={}".format(q), error < 1e-9, error


def cmd_selftest(args):
    failed = 0
    for name, passed, detail in _selftest_checks(args.max_q):
        suffix = "" if detail is None else " ({:.2e})".format(detail)
        print("{} {}{}".format("ok  " if passed else "FAIL", name, suffix))
        failed += not passed
    print("{} check(s) failed".format(failed) if failed else "all checks passed")
    return 1 if failed else 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=str(args.log_level).upper(),
                        format='%(asctime)s %(levelname)s %(name)s: %(message)s')
    try:
        return args.func(args)
    except (NoiseletSpcError, OSError) as e:
        print("{}: error: {}".format(PROG, e), file=sys.stderr)
        return 1


if __name__ == '__main__':
    sys.exit(main())
