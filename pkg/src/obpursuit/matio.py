"""Matrix interchange format.

Column-major CSV: a one-line header ``rows,cols,field`` followed by one
line per column holding `rows` comma-separated entries.  Complex entries
are written as ``re+imi`` (e.g. ``1.5-0.25i``); real matrices carry the
``real`` field tag and plain decimals.  Floats are written with repr
precision, so a save/load round trip is bit exact.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigError


def _fmt_real(x: float) -> str:
    return repr(float(x))


def _fmt_complex(z: complex) -> str:
    re, im = float(z.real), float(z.imag)
    sign = "+" if im >= 0 else "-"
    return f"{re!r}{sign}{abs(im)!r}i"


def _parse_entry(tok: str) -> complex:
    tok = tok.strip()
    if not tok.endswith("i"):
        return complex(float(tok), 0.0)
    body = tok[:-1]
    # split at the sign of the imaginary part: last +/- not preceded by e/E
    for k in range(len(body) - 1, 0, -1):
        if body[k] in "+-" and body[k - 1] not in "eE":
            return complex(float(body[:k]), float(body[k] + body[k + 1:]))
    raise ConfigError(f"malformed complex entry {tok!r}")


def save_matrix(path, a, field: str | None = None) -> None:
    """Write `a` in the column-major CSV format."""
    a = np.atleast_2d(np.asarray(a, dtype=np.complex128))
    if field is None:
        field = "real" if np.all(a.imag == 0) else "complex"
    if field not in ("real", "complex"):
        raise ConfigError(f"unknown field tag {field!r}")
    rows, cols = a.shape
    with open(path, "w") as fh:
        fh.write(f"{rows},{cols},{field}\n")
        for j in range(cols):
            col = a[:, j]
            if field == "real":
                fh.write(",".join(_fmt_real(v.real) for v in col))
            else:
                fh.write(",".join(_fmt_complex(v) for v in col))
            fh.write("\n")


def load_matrix(path) -> tuple[np.ndarray, str]:
    """Read a matrix written by :func:`save_matrix`; returns (array, field)."""
    with open(path) as fh:
        header = fh.readline().strip()
        parts = header.split(",")
        if len(parts) != 3:
            raise ConfigError(f"{path}: bad header {header!r}, expected 'rows,cols,field'")
        try:
            rows, cols = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise ConfigError(f"{path}: non-integer dimensions in header") from exc
        field = parts[2].strip()
        if field not in ("real", "complex"):
            raise ConfigError(f"{path}: unknown field tag {field!r}")
        if rows < 1 or cols < 1:
            raise ConfigError(f"{path}: dimensions must be positive")
        a = np.zeros((rows, cols), dtype=np.complex128)
        for j in range(cols):
            line = fh.readline()
            if not line:
                raise ConfigError(f"{path}: expected {cols} columns, file ended at {j}")
            toks = line.strip().split(",")
            if len(toks) != rows:
                raise ConfigError(f"{path}: column {j} has {len(toks)} entries, expected {rows}")
            a[:, j] = [_parse_entry(t) for t in toks]
    return a, field


def save_vector(path, v, field: str | None = None) -> None:
    """Write a vector as an (n, 1) matrix."""
    save_matrix(path, np.asarray(v, dtype=np.complex128).reshape(-1, 1), field)


def load_vector(path) -> np.ndarray:
    a, _ = load_matrix(path)
    if 1 not in a.shape:
        raise ConfigError(f"{path}: expected a vector, got shape {a.shape}")
    return a.ravel()
