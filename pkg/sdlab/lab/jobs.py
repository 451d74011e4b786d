"""Run independent experiments in worker processes."""
from __future__ import absolute_import

import logging
import os
from concurrent.futures import ProcessPoolExecutor

from sdlab.errors import ConfigurationError, exit_code_for

log = logging.getLogger(__name__)

THREADS_ENV = 'SDLAB_THREADS'


def max_workers(jobs):
    """``jobs`` capped by $SDLAB_THREADS and the cpu count."""
    cap = os.environ.get(THREADS_ENV)
    limit = os.cpu_count() or 1
    if cap:
        try:
            limit = int(cap)
        except ValueError:
            raise ConfigurationError('%s must be an integer, got %r' % (THREADS_ENV, cap))
        if limit < 1:
            raise ConfigurationError('%s must be >= 1, got %r' % (THREADS_ENV, cap))
    return max(1, min(int(jobs), limit))


def run_one(command, config_dict):
    """Worker entry point; returns the exit code instead of raising."""
    from sdlab.lab.cli import COMMANDS
    from sdlab.lab.config import ExperimentConfig
    try:
        config = ExperimentConfig.from_dict(config_dict)
        COMMANDS[command](config, None)
    except Exception as e: # pylint: disable=broad-except
        log.exception('%s failed for %s', command, config_dict.get('output_dir'))
        return exit_code_for(e)
    return 0


def run_jobs(configs, jobs, command='train'):
    """Run ``command`` for every config, up to ``jobs`` at a time.

    Configs travel as dicts so each worker builds its own objects; runs
    share no state beyond their distinct output directories.

    Returns:
        list of int: exit code per config, in input order
    """
    dirs = [c.output_dir for c in configs]
    if len(set(dirs)) != len(dirs):
        raise ConfigurationError('parallel runs need distinct output_dir values: %s' % (dirs,))
    workers = max_workers(jobs)
    payloads = [c.to_dict() for c in configs]
    if workers == 1 or len(configs) == 1:
        return [run_one(command, p) for p in payloads]
    log.info('Running %d %s jobs on %d workers', len(configs), command, workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_one, [command] * len(payloads), payloads))
