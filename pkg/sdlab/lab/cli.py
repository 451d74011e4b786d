from __future__ import absolute_import, print_function

import argparse
import importlib
import logging
import os
import sys

from sdlab.errors import ConfigurationError, SdlabError, exit_code_for, for_exit_code
from sdlab.lab.config import ExperimentConfig
from sdlab.lab.datasets import dataset_dir, gen_data
from sdlab.lab.io import read_csv
from sdlab.lab.jobs import run_jobs
from sdlab.lab.toy1d import run_toy1d
from sdlab.lab.trainer import CHECKPOINT_NAME, distill, train
from sdlab.util import make_rng
from sdlab.version import __version__

# sdlab.lab re-exports the analyze() function under the submodule's name,
# so resolve the module itself explicitly.
analyze_mod = importlib.import_module('sdlab.lab.analyze')

log = logging.getLogger(__name__)

LOG_FORMAT = '%(created)f %(filename)-23s %(threadName)s %(message)s'


def _opt(args, name, default=None):
    return getattr(args, name, default) if args is not None else default


def _checkpoint(config, args):
    return _opt(args, 'checkpoint') or os.path.join(config.output_dir, CHECKPOINT_NAME)


def cmd_gen_data(config, args):
    dataset = gen_data(config.task, config.data, make_rng(config.seed))
    return dataset.save(dataset_dir(config))


def cmd_train(config, args):
    return train(config, resume=not _opt(args, 'no_resume', False),
                 max_steps=_opt(args, 'max_steps'))


def cmd_distill(config, args):
    return distill(config, resume=not _opt(args, 'no_resume', False),
                   max_steps=_opt(args, 'max_steps'))


def cmd_sample(config, args):
    return analyze_mod.sample_command(config, _checkpoint(config, args), n=_opt(args, 'n'))


def cmd_toy1d(config, args):
    report = run_toy1d(config, max_steps=_opt(args, 'max_steps'))
    print('peaks %s minority alpha %d fidelity %.4f'
          % (report.peaks, report.minority_alpha, report.minority_fidelity))
    return report


def cmd_analyze(config, args):
    results = analyze_mod.analyze(config, _checkpoint(config, args),
                                  analyses=_opt(args, 'analysis'))
    for name in sorted(results):
        print('%s: %s' % (name, results[name]))
    return results


def cmd_wiener_report(config, args):
    path = analyze_mod.wiener_report(config, oracle=_opt(args, 'oracle') or None)
    print(path)
    return path


def cmd_metrics(config, args):
    """Print the latest row of the run's metrics CSV."""
    path = os.path.join(config.output_dir, 'metrics.csv')
    if not os.path.exists(path):
        raise ConfigurationError('no metrics at %s; train first' % (path,))
    header, rows = read_csv(path)
    if not rows:
        print('no metrics recorded yet')
        return {}
    latest = dict(zip(header, rows[-1]))
    width = max(len(k) for k in header)
    for key in header:
        print('%-*s %s' % (width, key, latest[key]))
    return latest


COMMANDS = {
    'gen-data': cmd_gen_data,
    'train': cmd_train,
    'distill': cmd_distill,
    'sample': cmd_sample,
    'toy1d': cmd_toy1d,
    'analyze': cmd_analyze,
    'wiener-report': cmd_wiener_report,
    'metrics': cmd_metrics,
}

# commands that --jobs may fan out over several --config files
PARALLEL = ('gen-data', 'train', 'distill', 'toy1d')


def build_parser():
    parser = argparse.ArgumentParser(
        prog='sdlab', description='Spectral diffusion lab: train, distill and analyze '
                                  'toy-scale diffusion models.')
    parser.add_argument('--version', action='version', version='%(prog)s ' + __version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', action='append', default=[],
                        help='experiment JSON; repeat with --jobs for several runs')
    common.add_argument('--seed', type=int, default=None, help='override the config seed')
    common.add_argument('--out', default=None, help='override the output directory')
    common.add_argument('--jobs', type=int, default=1,
                        help='parallel runs, capped by $SDLAB_THREADS')
    common.add_argument('-v', '--verbose', action='store_true', help='debug logging')

    sub = parser.add_subparsers(dest='command')
    sub.required = True
    sub.add_parser('gen-data', parents=[common], help='synthesize the dataset')
    for name, text in (('train', 'train a denoiser'),
                       ('distill', 'train a student against a teacher checkpoint')):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument('--max-steps', type=int, default=None,
                       help='stop after this many steps, leaving a resumable checkpoint')
        p.add_argument('--no-resume', action='store_true', help='ignore existing checkpoints')
    p = sub.add_parser('sample', parents=[common], help='sample and export frames')
    p.add_argument('--checkpoint', default=None)
    p.add_argument('-n', type=int, default=None, help='number of samples')
    p = sub.add_parser('toy1d', parents=[common], help='1D cosine-mixture experiment')
    p.add_argument('--max-steps', type=int, default=None)
    p = sub.add_parser('analyze', parents=[common], help='spectral analyses of a checkpoint')
    p.add_argument('--checkpoint', default=None)
    p.add_argument('--analysis', action='append', default=None,
                   help='one of %s; repeatable' % (', '.join(sorted(analyze_mod.ANALYSES)),))
    p = sub.add_parser('wiener-report', parents=[common], help='optimal linear filter table')
    p.add_argument('--oracle', action='store_true', help='add least-squares oracle columns')
    sub.add_parser('metrics', parents=[common], help='show the latest training metrics')
    return parser


def load_configs(args):
    overrides = {}
    if args.seed is not None:
        overrides['seed'] = args.seed
    paths = args.config or [None]
    configs = []
    for i, path in enumerate(paths):
        config = ExperimentConfig.load(path) if path else ExperimentConfig()
        local = dict(overrides)
        if args.out:
            local['output_dir'] = args.out if len(paths) == 1 else os.path.join(args.out, str(i))
        configs.append(config.replace(**local) if local else config)
    return configs


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format=LOG_FORMAT)
    try:
        configs = load_configs(args)
        if len(configs) > 1 or args.jobs > 1:
            if args.command not in PARALLEL:
                raise ConfigurationError('%s takes a single --config' % (args.command,))
            codes = run_jobs(configs, args.jobs, command=args.command)
            for config, code in zip(configs, codes):
                if code:
                    log.error('%s failed with %s (exit %d)', config.output_dir,
                              for_exit_code(code).__name__, code)
                else:
                    log.info('%s done', config.output_dir)
            return max(codes)
        COMMANDS[args.command](configs[0], args)
    except SdlabError as e:
        log.error('%s', e)
        return exit_code_for(e)
    return 0


if __name__ == '__main__':
    sys.exit(main())
