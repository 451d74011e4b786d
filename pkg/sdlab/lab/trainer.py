from __future__ import absolute_import

import csv
import logging
import os

import numpy as np

from sdlab.checkpoint import Checkpoint
from sdlab.diffusion.loss import draw_training_inputs, noise_prediction_loss
from sdlab.diffusion.schedule import make_linear_schedule
from sdlab.distill.trainer import build_adapters, distill_losses
from sdlab.errors import ConfigurationError, NumericalDivergenceError
from sdlab.lab.datasets import load_for
from sdlab.metrics import (
    Avg, CsvReporter, DictReporter, Max, MetricConfig, Metrics, Min, Total, Value)
from sdlab.models import build_model
from sdlab.structs import DistillLosses
from sdlab.tensor import AdamW
from sdlab.util import ensure_dir, make_rng

log = logging.getLogger(__name__)

LOSS_CSV_HEADER = ['step', 'l_ddpm', 'l_spatial', 'l_freq', 'total']
CHECKPOINT_NAME = 'checkpoint.sdlab'

# sensor name -> field of DistillLosses, or None for values the trainer supplies
SENSORS = [
    ('l-ddpm', 'l_ddpm'),
    ('l-spatial', 'l_spatial'),
    ('l-freq', 'l_freq'),
    ('loss-total', 'total'),
    ('grad-norm', None),
    ('lr', None),
]


def init_rng(seed, stream):
    """Independent generators per purpose: 0 model init, 1 adapters, 2 training."""
    return make_rng([int(seed), stream])


def n_classes(model):
    return int(getattr(model, 'config', {}).get('n_classes', 0))


def load_teacher(distill):
    if not distill.teacher_checkpoint:
        raise ConfigurationError('distillation needs distill.teacher_checkpoint')
    ckpt = Checkpoint.load(distill.teacher_checkpoint)
    if distill.teacher is not None and dict(distill.teacher) != ckpt.descriptor:
        raise ConfigurationError('teacher descriptor %r does not match checkpoint %r'
                                 % (distill.teacher, ckpt.descriptor))
    return ckpt.build_model()


def _truncate_csv(path, last_step):
    """Keep the header and rows with step <= last_step."""
    if not os.path.exists(path):
        return
    with open(path) as f:
        rows = list(csv.reader(f))
    kept = rows[:1] + [r for r in rows[1:] if r and int(r[0]) <= last_step]
    with open(path, 'w') as f:
        csv.writer(f, lineterminator='\n').writerows(kept)


class Trainer(object):
    """Noise-prediction training, optionally distilled from a frozen teacher.

    Writes under ``config.output_dir``:

        losses.csv       step,l_ddpm,l_spatial,l_freq,total per step
        metrics.csv      windowed sensor values every log_every steps
        checkpoint.sdlab latest state, plus checkpoints/step-<n>.sdlab

    An existing checkpoint with the same config hash is resumed; the loss
    stream then continues exactly as an uninterrupted run would.
    """
    def __init__(self, config, resume=True):
        self.config = config
        self.out = ensure_dir(config.output_dir)
        self.config_hash = config.config_hash()
        self.dataset = load_for(config)
        self.sched = make_linear_schedule(**config.schedule.config)

        self.model = build_model(config.model, rng=init_rng(config.seed, 0))
        log.info('Model %s with %d parameters', config.model['arch'],
                 self.model.num_parameters())
        self.teacher = self.adapters = None
        params = self.model.parameters()
        if config.distill is not None:
            self.teacher = load_teacher(config.distill)
            self.adapters = build_adapters(self.teacher, self.model, config.distill,
                                           init_rng(config.seed, 1))
            params = params + self.adapters.parameters()
            log.info('Distilling from a %d parameter teacher over pairs %s',
                     self.teacher.num_parameters(), self.adapters.pairs)
        self.optimizer = AdamW(params, **config.optimizer.adamw_configs())
        self.rng = init_rng(config.seed, 2)
        self.step = 0

        self.loss_path = os.path.join(self.out, 'losses.csv')
        self.metrics_path = os.path.join(self.out, 'metrics.csv')
        resumed = resume and self._resume()
        self.reporter = DictReporter()
        self.metrics = Metrics(MetricConfig(samples=1, event_window=config.log_every),
                               reporters=[self.reporter,
                                          CsvReporter(self.metrics_path, append=resumed)])
        self.sensors = {}
        for name, _ in SENSORS:
            sensor = self.metrics.sensor(name)
            sensor.add(self.metrics.metric_name(name + '-avg', 'train'), Avg())
            sensor.add(self.metrics.metric_name(name + '-max', 'train'), Max())
            sensor.add(self.metrics.metric_name(name + '-min', 'train'), Min())
            sensor.add(self.metrics.metric_name(name, 'train'), Value())
            self.sensors[name] = sensor
        self.examples = self.metrics.sensor('examples')
        # training examples drawn since step 0, resumed runs included
        self.examples.add(self.metrics.metric_name('examples', 'train'),
                          Total(self.step * config.optimizer.batch_size))

    @property
    def checkpoint_path(self):
        return os.path.join(self.out, CHECKPOINT_NAME)

    def _resume(self):
        if not os.path.exists(self.checkpoint_path):
            return False
        ckpt = Checkpoint.load(self.checkpoint_path)
        if ckpt.config_hash != self.config_hash:
            raise ConfigurationError('%s was written by a different config (hash %s, now %s)'
                                     % (self.checkpoint_path, ckpt.config_hash[:12],
                                        self.config_hash[:12]))
        self.rng = ckpt.restore(self.model, self.optimizer, self.adapters)
        self.step = ckpt.step
        _truncate_csv(self.loss_path, self.step)
        _truncate_csv(self.metrics_path, self.step)
        log.info('Resumed from %s at step %d', self.checkpoint_path, self.step)
        return True

    def _batch(self):
        data = self.dataset
        idx = self.rng.integers(0, len(data.train), size=self.config.optimizer.batch_size)
        x0 = data.train[idx]
        cond = None
        uncond_token = None
        if n_classes(self.model):
            cond = data.train_labels[idx]
            uncond_token = self.model.uncond_token
        batch = draw_training_inputs(x0, self.sched, self.rng, cond=cond,
                                     p_uncond=self.config.optimizer.p_uncond if cond is not None else 0.0,
                                     uncond_token=uncond_token)
        return x0, batch

    def train_step(self):
        """One optimizer step; returns DistillLosses of floats."""
        x0, batch = self._batch()
        self.optimizer.zero_grad()
        if self.teacher is not None:
            total, losses = distill_losses(self.teacher, self.model, self.adapters,
                                           batch, x0, self.config.distill)
        else:
            total = noise_prediction_loss(self.model, batch)
            value = total.item()
            losses = DistillLosses(value, 0.0, 0.0, value)
        total.backward()
        lr = self.optimizer.step()
        self.step += 1
        for name, field in SENSORS:
            if field is not None:
                self.sensors[name].record(getattr(losses, field), self.step)
        self.sensors['grad-norm'].record(self.optimizer.last_grad_norm, self.step)
        self.sensors['lr'].record(lr, self.step)
        self.examples.record(self.config.optimizer.batch_size, self.step)
        return losses

    def _log_window(self):
        window = self.reporter.snapshot(self.step)['train']
        log.info('step %d loss avg %.6f min %.6f max %.6f lr %.3g grad-norm %.4g examples %d',
                 self.step, window['loss-total-avg'], window['loss-total-min'],
                 window['loss-total-max'], window['lr'], window['grad-norm'],
                 window['examples'])
        return window

    def checkpoint(self):
        ckpt = Checkpoint.capture(self.model, step=self.step, config_hash=self.config_hash,
                                  optimizer=self.optimizer, adapters=self.adapters,
                                  rng=self.rng, extra={'task': self.config.task})
        ckpt.save(os.path.join(self.out, 'checkpoints', 'step-%08d.sdlab' % (self.step,)))
        ckpt.save(self.checkpoint_path)
        return ckpt

    def run(self, max_steps=None):
        """Train up to the configured step count.

        Arguments:
            max_steps (int, optional): stop after this many steps of this
                call, leaving a resumable checkpoint

        Returns:
            str: path of the latest checkpoint
        """
        cfg = self.config
        total_steps = cfg.optimizer.steps
        stop = total_steps if max_steps is None else min(total_steps, self.step + max_steps)
        new_file = not os.path.exists(self.loss_path) or self.step == 0
        with open(self.loss_path, 'w' if new_file else 'a') as f:
            writer = csv.writer(f, lineterminator='\n')
            if new_file:
                writer.writerow(LOSS_CSV_HEADER)
            while self.step < stop:
                try:
                    losses = self.train_step()
                except NumericalDivergenceError as e:
                    e.step = self.step + 1
                    log.error('Training diverged: %s', e)
                    raise
                writer.writerow([self.step] + [repr(float(v)) for v in losses])
                if self.step % cfg.log_every == 0:
                    self.metrics.flush(self.step)
                    self._log_window()
                if self.step % cfg.checkpoint_every == 0 or self.step == stop:
                    f.flush()
                    self.checkpoint()
        if self.step == 0 and not os.path.exists(self.checkpoint_path):
            self.checkpoint()
        self.metrics.close()
        return self.checkpoint_path


def train(config, resume=True, max_steps=None):
    """Run (or resume) the training described by ``config``."""
    return Trainer(config, resume=resume).run(max_steps=max_steps)


def distill(config, resume=True, max_steps=None):
    if config.distill is None:
        raise ConfigurationError('the distill command needs a "distill" config section')
    return train(config, resume=resume, max_steps=max_steps)


def loss_history(path):
    """Loss CSV as an [n_steps, 5] float array."""
    return np.loadtxt(path, delimiter=',', skiprows=1, ndmin=2)
