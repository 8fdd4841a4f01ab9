"""Chunked data sources and the two simulation designs.

Sources are re-iterable: every call to ``chunks()`` starts a fresh pass and
yields ``(X, y)`` blocks of at most ``chunk_size`` rows in storage order.

Random streams are derived from one integer seed via
``SeedSequence(seed, spawn_key=(stream,))`` so simulation draws and
per-pass shuffles never share a generator.
"""
import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .errors import ConfigError, InvalidInputError, ParseError, SchemaError

SIMULATE_STREAM = 0
SHUFFLE_STREAM = 1


def rng_for(seed, stream):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(stream,)))


@dataclass
class ArraySource:
    """In-memory dataset served in chunks (views, no copies)."""
    X: np.ndarray
    y: np.ndarray
    chunk_size: int = 10_000

    def __post_init__(self):
        self.X = np.ascontiguousarray(self.X, dtype=float)
        self.y = np.asarray(self.y, dtype=float)
        if self.X.ndim != 2 or self.y.shape != (self.X.shape[0],):
            raise SchemaError("X must be (N, p) and y must be (N,)")
        if self.chunk_size < 1:
            raise ConfigError("chunk_size must be >= 1")
        if not (np.all(np.isfinite(self.X)) and np.all(np.isfinite(self.y))):
            raise InvalidInputError("data contains non-finite values")

    @property
    def n_features(self):
        return self.X.shape[1]

    def chunks(self):
        n = self.X.shape[0]
        for start in range(0, n, self.chunk_size):
            stop = min(start + self.chunk_size, n)
            yield self.X[start:stop], self.y[start:stop]


@dataclass
class CsvSource:
    """Delimited text file read ``chunk_size`` rows at a time.

    ``response`` is a column name (requires a header), a 0-based index, or
    None when the file holds covariates only (``y`` is then all NaN).
    Every other column becomes a covariate, in file order.  The reader keeps
    ``peak_buffered_values``: the largest number of parsed values held at
    once, which is bounded by ``chunk_size * n_columns``.
    """
    path: Union[str, Path]
    response: Union[str, int, None] = "y"
    chunk_size: int = 10_000
    delimiter: str = ","
    has_header: bool = True
    peak_buffered_values: int = field(default=0, init=False)
    _columns: Optional[tuple] = field(default=None, init=False, repr=False)

    def __post_init__(self):
        self.path = Path(self.path)
        if self.chunk_size < 1:
            raise ConfigError("chunk_size must be >= 1")
        if isinstance(self.response, str) and not self.has_header:
            raise ConfigError("a named response column needs a header row")

    def _layout(self, header, width, line):
        if self.response is None:
            return None
        if isinstance(self.response, str):
            names = [h.strip() for h in header]
            if self.response not in names:
                raise SchemaError(f"response column {self.response!r} not in header")
            idx = names.index(self.response)
        else:
            idx = self.response if self.response >= 0 else width + self.response
            if not 0 <= idx < width:
                raise SchemaError(f"response index {self.response} out of range")
        if width < 2:
            raise SchemaError(f"line {line}: need at least one covariate column")
        return idx

    @property
    def n_features(self):
        if self._columns is None:
            for _ in self.chunks():
                break
        if self._columns is None:
            raise SchemaError(f"{self.path} holds no data rows")
        resp, width = self._columns
        return width if resp is None else width - 1

    def chunks(self):
        with open(self.path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh, delimiter=self.delimiter)
            header = None
            width = None
            resp = None
            resolved = False
            rows = []
            for line_no, row in enumerate(reader, start=1):
                if not row or (len(row) == 1 and not row[0].strip()):
                    continue
                if self.has_header and header is None:
                    header = row
                    width = len(row)
                    continue
                if width is None:
                    width = len(row)
                if not resolved:
                    resp = self._layout(header or [], width, line_no)
                    self._columns = (resp, width)
                    resolved = True
                if len(row) != width:
                    raise SchemaError(
                        f"line {line_no}: expected {width} fields, found {len(row)}")
                try:
                    vals = [float(v) for v in row]
                except ValueError as exc:
                    raise ParseError(str(exc), line_no) from None
                if not all(math.isfinite(v) for v in vals):
                    raise ParseError("non-finite value", line_no)
                rows.append(vals)
                if len(rows) == self.chunk_size:
                    yield self._emit(rows, resp)
                    rows = []
            if rows:
                yield self._emit(rows, resp)

    def _emit(self, rows, resp):
        block = np.array(rows, dtype=float)
        self.peak_buffered_values = max(self.peak_buffered_values, block.size)
        if resp is None:
            return block, np.full(len(block), np.nan)
        y = block[:, resp].copy()
        X = np.delete(block, resp, axis=1)
        return X, y


def stream_chunks(src):
    """One pass over ``src`` as an iterator of ``(X, y)`` batches."""
    return src.chunks()


def score_at_zero(src, spec):
    """(sum_n l'(0; y_n) x_n, N) accumulated over one pass."""
    lp = spec.derivative()
    total = None
    n = 0
    for X, y in src.chunks():
        w = np.array([lp(0.0, float(v)) for v in y])
        part = X.T @ w
        total = part if total is None else total + part
        n += len(y)
    if n == 0:
        raise InvalidInputError("empty data stream")
    return total, n


@dataclass
class SimulatedDataset:
    X: np.ndarray
    y: np.ndarray
    theta_star: np.ndarray
    noise_scale: float = 1.0
    params: dict = field(default_factory=dict)

    def source(self, chunk_size=10_000):
        return ArraySource(self.X, self.y, chunk_size)


def lasso_theta_star(p):
    j = np.arange(1, p + 1)
    return (-1.0) ** j * np.exp(-2.0 * (j - 1) / 20.0)


def simulate_lasso(N, p, rho=0.0, snr=3.0, seed=0, standardize=False):
    """Equicorrelated Gaussian design with alternating, decaying coefficients.

    Columns share one latent factor: ``x_j = sqrt(rho) z0 + sqrt(1-rho) z_j``,
    so every pair has correlation ``rho``.  The noise scale ``k`` makes
    ``Var(x' theta_star) / k^2 == snr`` using the exact design covariance.
    """
    if N < 1 or p < 1:
        raise InvalidInputError("N and p must be >= 1")
    if not 0.0 <= rho < 1.0:
        raise InvalidInputError(f"rho must lie in [0, 1), got {rho!r}")
    if not snr > 0:
        raise InvalidInputError("snr must be positive")
    rng = rng_for(seed, SIMULATE_STREAM)
    z0 = rng.standard_normal((N, 1))
    Z = rng.standard_normal((N, p))
    X = math.sqrt(rho) * z0 + math.sqrt(1.0 - rho) * Z
    if standardize:
        X = (X - X.mean(axis=0)) / X.std(axis=0)
    theta = lasso_theta_star(p)
    signal_var = (1.0 - rho) * float(theta @ theta) + rho * float(theta.sum()) ** 2
    k = math.sqrt(signal_var / snr)
    y = X @ theta + k * rng.standard_normal(N)
    params = dict(generator="lasso", N=N, p=p, rho=rho, snr=snr, seed=seed,
                  standardize=standardize)
    return SimulatedDataset(X, y, theta, k, params)


def simulate_huber(N, p, seed=0, contamination=0.05, outlier=10.0):
    """Design entries N(0, 1/N); noise from the contaminated normal CN(0.05, 10)."""
    if N < 1 or p < 1:
        raise InvalidInputError("N and p must be >= 1")
    rng = rng_for(seed, SIMULATE_STREAM)
    direction = rng.standard_normal(p)
    theta = direction * (6.0 * math.sqrt(p) / np.linalg.norm(direction))
    X = rng.standard_normal((N, p)) / math.sqrt(N)
    eps = rng.standard_normal(N)
    eps[rng.random(N) < contamination] = outlier
    y = X @ theta + eps
    params = dict(generator="huber", N=N, p=p, seed=seed,
                  contamination=contamination, outlier=outlier)
    return SimulatedDataset(X, y, theta, 1.0, params)


def sidecar_path(path):
    return Path(path).with_suffix(".json")


def write_dataset(ds, path, delimiter=","):
    """Write ``x1..xp,y`` rows at full precision plus a JSON sidecar."""
    path = Path(path)
    p = ds.X.shape[1]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, delimiter=delimiter, lineterminator="\n")
        w.writerow([f"x{j}" for j in range(1, p + 1)] + ["y"])
        for row, yv in zip(ds.X, ds.y):
            w.writerow([repr(float(v)) for v in row] + [repr(float(yv))])
    meta = dict(ds.params, theta_star=[float(v) for v in ds.theta_star],
                noise_scale=float(ds.noise_scale))
    sidecar = sidecar_path(path)
    sidecar.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return sidecar


def read_all(src):
    """Materialise a source (testing and small data only)."""
    Xs, ys = zip(*src.chunks())
    return np.vstack(Xs), np.concatenate(ys)
