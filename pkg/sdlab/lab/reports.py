"""Report files written by the lab commands.

Everything here turns analysis results into CSV, PGM, ``.npy`` or plot
files; no numerics beyond formatting happen in this module.
"""
from __future__ import absolute_import, division

import logging
import os

import numpy as np

from sdlab.analysis.evolution import band_convergence
from sdlab.analysis.freq_error import FREQ_ERROR_CSV_HEADER, report_row
from sdlab.analysis.wiener import (
    RECONSTRUCTION_VARIANTS, empirical_power_spectrum, fit_optimal_linear_filter,
    reconstruction_response, wiener_response)
from sdlab.errors import IllegalArgumentError
from sdlab.lab.io import save_plot, write_csv, write_pgm
from sdlab.spectral.profile import radial_bin_edges, write_profile_csv
from sdlab.util import ensure_dir

log = logging.getLogger(__name__)

EVOLUTION_CSV_HEADER = ('snapshot', 't', 'bin_center', 'mean_magnitude', 'ratio')
TRAJECTORY_CSV_HEADER = ('step', 't', 'file')


def _frame(batch):
    """First image of a batch as [H, W]."""
    image = np.asarray(batch)[0]
    while image.ndim > 2:
        image = image[0]
    return image


def write_evolution(report, out_dir):
    """evolution.csv, convergence.csv, one PGM per snapshot and a plot."""
    ensure_dir(out_dir)
    rows = []
    for k, snap in enumerate(report.snapshots):
        for b, center in enumerate(report.bin_centers):
            if report.counts[b]:
                rows.append((k, snap.t, center, report.profiles[k, b], report.ratios[k, b]))
    write_csv(os.path.join(out_dir, 'evolution.csv'), EVOLUTION_CSV_HEADER, rows)
    low, high = band_convergence(report)
    write_csv(os.path.join(out_dir, 'convergence.csv'), ('band', 'snapshot'),
              [('low', low), ('high', high)])
    for k, snap in enumerate(report.snapshots):
        write_pgm(os.path.join(out_dir, 'frames', 'snapshot-%03d-t%04d.pgm' % (k, snap.t)),
                  _frame(snap.x0_hat))
    filled = report.counts > 0
    save_plot(os.path.join(out_dir, 'evolution.png'), report.bin_centers[filled],
              dict(('t=%d' % s.t, report.ratios[k, filled])
                   for k, s in enumerate(report.snapshots)),
              xlabel='radial frequency', ylabel='|X| / final')
    log.info('Evolution: low band converges at snapshot %d, high band at %d', low, high)
    return low, high


def write_gating(recorder, path):
    rows = recorder.rows()
    write_csv(path, recorder.header(), rows)
    return path


def write_freq_error(report, sigmas, path):
    header = FREQ_ERROR_CSV_HEADER + ('sigma_low', 'sigma_high')
    row = report_row(report) + ('%.17g' % sigmas[0], '%.17g' % sigmas[1])
    write_csv(path, header, [row])
    return path


def write_dft_diff(diff_map, profile, out_dir):
    ensure_dir(out_dir)
    np.save(os.path.join(out_dir, 'dft_diff.npy'), diff_map)
    peak = float(diff_map.max()) or 1.0
    write_pgm(os.path.join(out_dir, 'dft_diff.pgm'), diff_map / peak, lo=0.0, hi=1.0)
    write_profile_csv(profile, os.path.join(out_dir, 'dft_diff_profile.csv'))
    return out_dir


def _label(a):
    return ('%g' % a).replace('.', 'p')


def wiener_table(spectrum, alpha_bars, size, n_bins, oracle_signals=None, rng=None,
                 target='score'):
    """Closed-form responses per alpha_bar over the radial grid.

    For each alpha_bar the columns are ``H_<a>``, ``caption_<a>`` and
    ``text_<a>``. With ``oracle_signals`` two more follow: the closed form
    on the signals' own binned power (``empirical_<a>``) and the
    least-squares fit on them (``oracle_<a>``).

    Returns:
        (header tuple, list of row tuples)
    """
    if not alpha_bars:
        raise IllegalArgumentError('alpha_bars must not be empty')
    edges = radial_bin_edges(size, size, n_bins)
    freqs = 0.5 * (edges[1:] + edges[:-1])
    header = ['f']
    columns = [freqs]
    empirical = None
    if oracle_signals is not None:
        empirical = empirical_power_spectrum(oracle_signals, n_bins)
    for a in alpha_bars:
        wr = wiener_response(spectrum, a, freqs=freqs)
        label = _label(a)
        header.extend(['H_' + label] + ['%s_%s' % (v, label) for v in RECONSTRUCTION_VARIANTS])
        columns.append(wr.response)
        columns.extend(reconstruction_response(wr, v) for v in RECONSTRUCTION_VARIANTS)
        if empirical is not None:
            header.extend(['empirical_' + label, 'oracle_' + label])
            columns.append(wiener_response(empirical, a).response)
            fit = fit_optimal_linear_filter(oracle_signals, a, rng, n_bins=n_bins,
                                            target=target,
                                            min_samples=min(1000, len(oracle_signals)))
            columns.append(fit.response)
    rows = [tuple(col[i] for col in columns) for i in range(len(freqs))]
    return tuple(header), rows


def write_wiener_report(header, rows, out_dir):
    ensure_dir(out_dir)
    path = write_csv(os.path.join(out_dir, 'wiener.csv'), header, rows)
    table = np.asarray(rows, dtype=np.float64)
    series = dict((name, table[:, i]) for i, name in enumerate(header) if name.startswith('H_'))
    save_plot(os.path.join(out_dir, 'wiener.png'), table[:, 0], series,
              xlabel='radial frequency', ylabel='H*(f)', logy=True)
    return path


def write_toy1d(report, out_dir):
    """Histogram CSV, per-sample spectra, summary CSV and the raw samples."""
    ensure_dir(out_dir)
    bins = np.arange(len(report.real_hist))
    write_csv(os.path.join(out_dir, 'histogram.csv'), ('bin', 'real', 'generated'),
              zip(bins, report.real_hist, report.gen_hist))
    write_csv(os.path.join(out_dir, 'spectra.csv'),
              ['sample'] + ['bin_%d' % b for b in bins],
              ([i] + list(row) for i, row in enumerate(report.gen_spectra)))
    summary = [('peaks', ' '.join(str(p) for p in report.peaks))]
    for alpha in sorted(report.fidelity):
        summary.append(('fidelity_%d' % alpha, report.fidelity[alpha]))
    summary.append(('minority_alpha', report.minority_alpha))
    summary.append(('minority_fidelity', report.fidelity[report.minority_alpha]))
    write_csv(os.path.join(out_dir, 'summary.csv'), ('key', 'value'), summary)
    np.save(os.path.join(out_dir, 'samples.npy'), report.samples)
    save_plot(os.path.join(out_dir, 'histogram.png'), bins,
              {'real': report.real_hist, 'generated': report.gen_hist},
              xlabel='frequency bin', ylabel='mean |X|')
    return out_dir


def export_trajectory(samples, snapshots, out_dir, n_steps):
    """Frames for each x0 snapshot and the final batch, indexed by
    ``trajectory.csv`` (``step,t,file``).

    Image batches are indexed by their PGM frames; 1D batches have no
    image form and are indexed by their ``.npy`` arrays. The final batch is
    recorded at step ``n_steps`` with t=0.
    """
    ensure_dir(out_dir)
    index = []
    for snap in snapshots:
        name = 'x0hat-%04d-t%04d' % (snap.index, snap.t)
        np.save(os.path.join(out_dir, name + '.npy'), snap.x0_hat)
        if np.ndim(snap.x0_hat) >= 3:
            write_pgm(os.path.join(out_dir, name + '.pgm'), _frame(snap.x0_hat))
            index.append((snap.index, snap.t, name + '.pgm'))
        else:
            index.append((snap.index, snap.t, name + '.npy'))
    np.save(os.path.join(out_dir, 'samples.npy'), samples)
    if np.ndim(samples) >= 3:
        for i in range(len(samples)):
            name = 'sample-%04d.pgm' % (i,)
            write_pgm(os.path.join(out_dir, name), _frame(samples[i:i + 1]))
            index.append((n_steps, 0, name))
    else:
        index.append((n_steps, 0, 'samples.npy'))
    write_csv(os.path.join(out_dir, 'trajectory.csv'), TRAJECTORY_CSV_HEADER, index)
    return out_dir
