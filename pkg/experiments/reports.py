"""
Per-level results of an experiment and their CSV rendering.
"""
import math

import pandas as pd

NOT_AVAILABLE = 'N/A'

BASE_COLUMNS = ['level', 'dofs', 'iters', 'kappa', 'err_u', 'eoc_u', 'err_flux', 'eoc_flux']
DIVERGENCE_COLUMNS = ['err_div', 'eoc_div']


class LevelRow(object):
    """
    @param iterations: iteration count, `NOT_AVAILABLE` on failure, None for direct solves
    @param kappa: condition estimate from the PCG Lanczos coefficients
    """

    def __init__(self, level, dofs, iterations=None, kappa=None, err_u=None, err_flux=None, err_div=None):
        self.level = level
        self.dofs = dofs
        self.iterations = iterations
        self.kappa = kappa
        self.errors = {'u': err_u, 'flux': err_flux, 'div': err_div}
        self.eoc = {'u': None, 'flux': None, 'div': None}

    @property
    def failed(self) -> bool:
        return self.iterations == NOT_AVAILABLE


def compute_eoc(coarse_error, fine_error):
    """log2 of the error ratio of two levels with halved mesh size"""
    if coarse_error is None or fine_error is None or coarse_error <= 0 or fine_error <= 0:
        return None
    return math.log2(coarse_error / fine_error)


def _format(value, template):
    if value is None:
        return ''
    if isinstance(value, str):
        return value
    return template.format(value)


class SolverReport(object):
    def __init__(self, title, with_divergence=False):
        self.title = title
        self.with_divergence = with_divergence
        self.rows = []
        self.wall_time = None

    @property
    def columns(self):
        return BASE_COLUMNS + (DIVERGENCE_COLUMNS if self.with_divergence else [])

    def add(self, row):
        if self.rows:
            previous = self.rows[-1]
            for key in row.errors:
                row.eoc[key] = compute_eoc(previous.errors[key], row.errors[key])
        self.rows.append(row)
        return row

    def records(self):
        for row in self.rows:
            record = [str(row.level), str(row.dofs), _format(row.iterations, '{:d}'),
                      _format(row.kappa, '{:.4g}')]
            keys = ['u', 'flux'] + (['div'] if self.with_divergence else [])
            for key in keys:
                record += [_format(row.errors[key], '{:.6e}'), _format(row.eoc[key], '{:.4f}')]
            yield record

    def to_frame(self) -> pd.DataFrame:
        """The report as formatted strings, one row per level"""
        return pd.DataFrame(list(self.records()), columns=self.columns, dtype=str)

    def to_csv(self, stream):
        self.to_frame().to_csv(stream, index=False, lineterminator='\n')
