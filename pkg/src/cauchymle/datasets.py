"""Synthetic dataset generators and CSV dataset files.

Generators are deterministic given a seed.  Monte Carlo batches derive the
seed of run r from a master seed through numpy's splittable scheme
SeedSequence(master, spawn_key=(r,)), so runs are reproducible
independently of execution order.

Dataset files are headerless CSV, one observation per row:

  univariate   one float per row; the token "inf" (case-insensitive)
               denotes the boundary point at infinity
  multivariate n comma-separated floats per row
  matrix       an n x m observation flattened row-major
  regression   two columns t, x
"""

import math
from dataclasses import dataclass

import numpy as np

from .halfspace import INFINITY, is_infinity

GENERATOR_KINDS = ("gaussian", "cauchy1d", "mixture", "gaussian_nd",
                   "matrix_standard")


class DataFormatError(ValueError):
    """A dataset file row could not be parsed."""


@dataclass
class GeneratorSpec:
    """What to sample: a distribution kind, its parameters, a size, a seed."""

    kind: str
    sample_size: int
    seed: int = 0
    mean: float = 0.0                      # gaussian
    sd: float = 1.0                        # gaussian
    u: float = 0.0                         # cauchy1d center
    v: float = 1.0                         # cauchy1d width
    weights: tuple = ()                    # mixture
    components: tuple = ()                 # mixture: (mean, sd) pairs
    mean_vector: np.ndarray = None         # gaussian_nd
    covariance: np.ndarray = None          # gaussian_nd
    rows: int = 0                          # matrix_standard n
    cols: int = 0                          # matrix_standard m

    def __post_init__(self):
        if self.kind not in GENERATOR_KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.sample_size < 1:
            raise ValueError("sample_size must be at least 1")
        if self.kind == "cauchy1d" and not self.v > 0:
            raise ValueError("cauchy width v must be positive")
        if self.kind == "gaussian" and not self.sd > 0:
            raise ValueError("gaussian sd must be positive")
        if self.kind == "mixture":
            w = np.asarray(self.weights, dtype=float)
            if len(self.weights) != len(self.components) or len(w) == 0:
                raise ValueError("mixture needs matching weights and components")
            if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
                raise ValueError("mixture weights must be nonnegative and sum to 1")
            if any(len(c) != 2 or not c[1] > 0 for c in self.components):
                raise ValueError("mixture components are (mean, sd) with sd > 0")
        if self.kind == "gaussian_nd":
            mu = np.asarray(self.mean_vector, dtype=float)
            cov = np.asarray(self.covariance, dtype=float)
            if mu.ndim != 1 or cov.shape != (mu.size, mu.size):
                raise ValueError("gaussian_nd needs a mean vector and a matching "
                                 "covariance matrix")
            if np.any(np.linalg.eigvalsh(0.5 * (cov + cov.T)) <= 0):
                raise ValueError("covariance must be positive definite")
        if self.kind == "matrix_standard" and (self.rows < 1 or self.cols < 1):
            raise ValueError("matrix_standard needs rows >= 1 and cols >= 1")


def run_rng(seed, run_index=None):
    """Generator for a run: the master stream, or the split stream of run r."""
    if run_index is None:
        return np.random.default_rng(np.random.SeedSequence(seed))
    return np.random.default_rng(np.random.SeedSequence(seed,
                                                        spawn_key=(run_index,)))


def sample_cauchy(u, v, size, rng):
    """Inverse-CDF sampling: u + v tan(pi (U - 1/2))."""
    return u + v * np.tan(np.pi * (rng.random(size) - 0.5))


def sample_matrix_standard(n, m, size, rng):
    """Draw from the standard matrix-variate family (identity parameter).

    A (m+n) x m standard normal frame Z, conditioned on an invertible
    bottom m x m block, yields X = Z_top Z_bottom^-1.
    """
    out = np.empty((size, n, m))
    for i in range(size):
        while True:
            Z = rng.standard_normal((m + n, m))
            bottom = Z[n:, :]
            if abs(np.linalg.det(bottom)) > 1e-12:
                break
        out[i] = Z[:n, :] @ np.linalg.inv(bottom)
    return out


def generate(spec, run_index=None):
    """Sample a dataset; deterministic given (spec.seed, run_index)."""
    rng = run_rng(spec.seed, run_index)
    N = spec.sample_size
    if spec.kind == "gaussian":
        return spec.mean + spec.sd * rng.standard_normal(N)
    if spec.kind == "cauchy1d":
        return sample_cauchy(spec.u, spec.v, N, rng)
    if spec.kind == "mixture":
        w = np.asarray(spec.weights, dtype=float)
        which = rng.choice(len(w), size=N, p=w)
        draws = rng.standard_normal(N)
        means = np.array([c[0] for c in spec.components])
        sds = np.array([c[1] for c in spec.components])
        return means[which] + sds[which] * draws
    if spec.kind == "gaussian_nd":
        mu = np.asarray(spec.mean_vector, dtype=float)
        cov = np.asarray(spec.covariance, dtype=float)
        L = np.linalg.cholesky(0.5 * (cov + cov.T))
        return mu + rng.standard_normal((N, mu.size)) @ L.T
    if spec.kind == "matrix_standard":
        return sample_matrix_standard(spec.rows, spec.cols, N, rng)
    raise ValueError(f"unknown generator kind {spec.kind!r}")


def _fmt(x):
    return repr(float(x))


def write_dataset(path, data, mode="multivariate"):
    """Serialize a dataset as headerless CSV (floats round-trip exactly)."""
    lines = []
    if mode == "univariate":
        for x in data:
            lines.append("inf" if is_infinity(x) else _fmt(x))
    elif mode == "multivariate":
        arr = np.atleast_2d(np.asarray(data, dtype=float))
        for row in arr:
            lines.append(",".join(_fmt(x) for x in row))
    elif mode == "matrix":
        arr = np.asarray(data, dtype=float)
        for obs in arr:
            lines.append(",".join(_fmt(x) for x in obs.ravel()))
    elif mode == "regression":
        for t, x in data:
            lines.append(f"{_fmt(t)},{_fmt(x)}")
    else:
        raise ValueError(f"unknown dataset mode {mode!r}")
    text = "\n".join(lines) + "\n"
    if hasattr(path, "write"):
        path.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)
    return text


def _parse_float(tok, lineno):
    tok = tok.strip()
    try:
        val = float(tok)
    except ValueError:
        raise DataFormatError(f"line {lineno}: cannot parse {tok!r} as a number")
    if not math.isfinite(val):
        raise DataFormatError(f"line {lineno}: non-finite value {tok!r}")
    return val


def parse_dataset(path, mode="multivariate", rows=None, cols=None):
    """Read a dataset file.

    Returns a list (univariate: floats and INFINITY), an (N, n) array
    (multivariate), an (N, rows, cols) array (matrix), or a pair of arrays
    (t, x) in regression mode.  Malformed rows raise DataFormatError with
    their line number; "inf" is accepted only in univariate mode.
    """
    if hasattr(path, "read"):
        text = path.read()
    else:
        with open(path) as fh:
            text = fh.read()
    records = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        toks = line.split(",")
        if mode == "univariate":
            if len(toks) != 1:
                raise DataFormatError(f"line {lineno}: expected one column")
            tok = toks[0].strip()
            if tok.lower() == "inf":
                records.append(INFINITY)
            else:
                records.append(_parse_float(tok, lineno))
            continue
        if any(t.strip().lower() == "inf" for t in toks):
            raise DataFormatError(
                f"line {lineno}: 'inf' is only allowed in univariate mode")
        vals = [_parse_float(t, lineno) for t in toks]
        if mode == "multivariate":
            if records and len(vals) != len(records[0]):
                raise DataFormatError(f"line {lineno}: inconsistent arity")
            records.append(vals)
        elif mode == "matrix":
            if rows is None or cols is None:
                raise ValueError("matrix mode requires rows and cols")
            if len(vals) != rows * cols:
                raise DataFormatError(
                    f"line {lineno}: expected {rows * cols} values")
            records.append(np.asarray(vals).reshape(rows, cols))
        elif mode == "regression":
            if len(vals) != 2:
                raise DataFormatError(f"line {lineno}: expected two columns t,x")
            records.append(vals)
        else:
            raise ValueError(f"unknown dataset mode {mode!r}")
    if not records:
        raise DataFormatError("dataset is empty")
    if mode == "univariate":
        return records
    if mode == "multivariate":
        return np.asarray(records, dtype=float)
    if mode == "matrix":
        return np.stack(records)
    ts = np.array([r[0] for r in records])
    xs = np.array([r[1] for r in records])
    return ts, xs
