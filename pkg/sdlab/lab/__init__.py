from __future__ import absolute_import

from sdlab.lab.config import ExperimentConfig
from sdlab.lab.datasets import Dataset, gen_data
from sdlab.lab.trainer import Trainer, distill, train
from sdlab.lab.toy1d import run_toy1d
from sdlab.lab.analyze import analyze, wiener_report
from sdlab.lab.jobs import run_jobs
from sdlab.lab.io import read_pgm, write_csv, write_pgm

__all__ = [
    'ExperimentConfig', 'Dataset', 'gen_data', 'Trainer', 'distill', 'train',
    'run_toy1d', 'analyze', 'wiener_report', 'run_jobs', 'read_pgm',
    'write_csv', 'write_pgm',
]
