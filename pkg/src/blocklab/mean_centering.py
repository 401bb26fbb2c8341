"""Mean centering of a stored data matrix, classically and as block encodings.

The three modes are named by their matrix-product form: pre-multiplication by
the centering projector (CX), post-multiplication (XC), and both (CXC).  On
the storage convention (entry (r, c) = component r of sample c) they subtract
the per-sample means, the per-component means, and both plus the grand mean.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from .block_encoding import BlockEncoding, product
from .centering import centering_encoding, centering_matrix
from .data_encoding import matrix_encoding
from .matrix_core import as_complex_matrix, embed_power_of_two

__all__ = ["CenteringMode", "mean_vectors", "classical_center", "mc_encoding"]


class CenteringMode(Enum):
    """Which side(s) the centering projector multiplies the data matrix on."""

    CX = "cx"
    XC = "xc"
    CXC = "cxc"

    @classmethod
    def parse(cls, text: str) -> "CenteringMode":
        try:
            return cls(text.strip().lower())
        except ValueError as exc:
            raise ValueError(f"unknown centering mode {text!r}; use cx, xc or cxc") from exc


def mean_vectors(x) -> tuple[np.ndarray, np.ndarray, complex]:
    """Per-sample means, per-component means, and the grand mean.

    Samples are columns, so the per-sample mean of sample c averages column c
    and the per-component mean of component r averages row r.
    """
    x = as_complex_matrix(x)
    u = x.mean(axis=0)
    v = x.mean(axis=1)
    xbar = complex(x.mean())
    if xbar.imag == 0.0:
        xbar = xbar.real
    return u, v, xbar


def classical_center(x, mode: CenteringMode) -> np.ndarray:
    """Mean-subtracted matrix, computed entrywise from the mean vectors.

    Cross-checked internally against the equivalent centering-projector
    products; a disagreement beyond round-off indicates a storage-convention
    bug and raises.
    """
    x = as_complex_matrix(x)
    if x.shape[0] != x.shape[1]:
        raise ValueError("classical centering expects a square stored matrix")
    u, v, xbar = mean_vectors(x)
    if mode is CenteringMode.CX:
        entrywise = x - u[np.newaxis, :]
    elif mode is CenteringMode.XC:
        entrywise = x - v[:, np.newaxis]
    elif mode is CenteringMode.CXC:
        entrywise = x - u[np.newaxis, :] - v[:, np.newaxis] + xbar
    else:
        raise ValueError(f"unknown mode {mode!r}")

    c = centering_matrix(x.shape[0])
    if mode is CenteringMode.CX:
        via_product = c @ x
    elif mode is CenteringMode.XC:
        via_product = x @ c
    else:
        via_product = c @ x @ c
    scale = max(1.0, float(np.max(np.abs(x))))
    if np.max(np.abs(entrywise - via_product)) > 1e-12 * scale:
        raise AssertionError("entrywise centering disagrees with projector products")
    return entrywise


def mc_encoding(x, mode: CenteringMode) -> BlockEncoding:
    """Block encoding of the centered matrix, alpha = ||X||_F.

    The data matrix is embedded to a power-of-two square if needed, encoded
    once, and composed with the centering encoding of the padded dimension
    on the side(s) the mode requires.
    """
    x = embed_power_of_two(as_complex_matrix(x))
    data = matrix_encoding(x)
    cent = centering_encoding(x.shape[0])
    if mode is CenteringMode.CX:
        return product(cent, data)
    if mode is CenteringMode.XC:
        return product(data, cent)
    if mode is CenteringMode.CXC:
        return product(product(cent, data), cent)
    raise ValueError(f"unknown mode {mode!r}")
