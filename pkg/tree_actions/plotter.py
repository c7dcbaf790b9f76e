import os

import matplotlib
import numpy as np
import pandas as pd

matplotlib.use('Agg')
import matplotlib.pyplot as plt  # noqa: E402


def _save(fig, path):
    out_dir = os.path.dirname(path)
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
    fig.savefig(path, bbox_inches='tight')
    plt.close(fig)


def overlap_plotter(trials: pd.DataFrame, path):
    '''
    Scatter of image overlap against input overlap, both in periods, one
    colour per overlap multiple m.
    '''
    if trials.empty:
        return None

    df = trials.copy()
    df['image_periods'] = df.image_overlap.astype(float) / \
        df.image_translation_length.astype(float)
    # coinciding axes have unbounded overlap
    df = df[np.isfinite(df.image_periods)]

    fig, ax = plt.subplots()
    for m, group in df.groupby('m'):
        ax.scatter(group.input_overlap.astype(float), group.image_periods,
                   s=8, label=f"m = {m}")

    # Axis labels and legend
    ax.set_xlabel('input overlap')
    ax.set_ylabel('image overlap / |phi(g)|')
    ax.legend(loc='upper left', fontsize='small')

    _save(fig, path)
    return path


def n_hat_plotter(n_hat, path):
    '''
    Estimated n(C) against C; constants without an estimate are left out.
    '''
    points = sorted((c, n) for c, n in n_hat.items() if n is not None)
    if not points:
        return None

    fig, ax = plt.subplots()
    ax.step([c for c, _ in points], [n for _, n in points], where='post',
            marker='o')
    ax.set_xlabel('C')
    ax.set_ylabel('estimated n(C)')

    _save(fig, path)
    return path


def margin_plotter(histograms, path):
    '''
    Bar charts of the lower and upper distance sandwich margins.
    '''
    if not histograms:
        return None

    fig, axes = plt.subplots(1, len(histograms), squeeze=False)
    for ax, (name, histogram) in zip(axes[0], sorted(histograms.items())):
        edges = histogram['edges']
        widths = [b - a for a, b in zip(edges, edges[1:])]
        ax.bar(edges[:-1], histogram['counts'], widths, align='edge')
        ax.set_title(name.replace('_', ' '))

    _save(fig, path)
    return path
