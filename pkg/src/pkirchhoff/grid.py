"""Uniform 1-D grids, discrete W^{1,p}_0 seminorms and nodal quadrature.

Fields live on the ``n`` interior nodes of ``(0, L)``; the two boundary
values are fixed at zero and never stored.  Differences are taken on the
``n + 1`` edges, including the two edges touching the boundary.
"""

import csv
import io
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError

#: Regularization used in the p-Laplacian flux when p < 2.
FLUX_EPS = 1e-12


@dataclass(frozen=True)
class Grid:
    """Uniform grid with ``n`` interior nodes on ``(0, length)``.

    Attributes
    ----------
    length : float
        Domain length ``L``.
    n : int
        Number of interior nodes.
    """

    length: float
    n: int

    @property
    def h(self):
        """Mesh width ``L / (n + 1)``."""
        return self.length / (self.n + 1)

    @property
    def nodes(self):
        """Coordinates of the interior nodes."""
        return self.all_nodes[1:-1]

    @property
    def all_nodes(self):
        """Coordinates including both boundary nodes."""
        return np.linspace(0.0, self.length, self.n + 2)

    def check_field(self, u, name="u"):
        """Return ``u`` as a float array of this grid's size."""
        arr = np.asarray(u, dtype=float)
        if arr.shape != (self.n,):
            raise InvalidArgumentError(
                f"{name} has shape {arr.shape}, grid expects ({self.n},)")
        if not np.all(np.isfinite(arr)):
            raise InvalidArgumentError(f"{name} contains non-finite values")
        return arr

    def constant(self, value):
        """Constant nodal field."""
        return np.full(self.n, float(value))

    def with_boundary(self, u):
        """Pad ``u`` with the two Dirichlet zeros."""
        return np.concatenate(([0.0], self.check_field(u), [0.0]))


def build_grid(length, n):
    """Validate inputs and build a :class:`Grid`.

    Parameters
    ----------
    length : float
        Positive finite domain length.
    n : int
        Number of interior nodes, at least 2.
    """
    if isinstance(n, bool) or int(n) != n or n < 2:
        raise InvalidArgumentError(f"n must be an integer >= 2, got {n!r}")
    length = float(length)
    if not np.isfinite(length) or length <= 0:
        raise InvalidArgumentError(f"L must be finite and positive, got {length!r}")
    return Grid(length, int(n))


def edge_differences(grid, u):
    """Forward differences ``(u_j - u_{j-1}) / h`` on all ``n + 1`` edges."""
    return np.diff(grid.with_boundary(u)) / grid.h


def seminorm_w1p(grid, u, p):
    """Discrete ``||u|| = (sum_edges |du/h|^p h)^(1/p)``."""
    if p <= 1:
        raise InvalidArgumentError(f"p must exceed 1, got {p}")
    d = edge_differences(grid, u)
    return float(np.sum(np.abs(d) ** p) * grid.h) ** (1.0 / p)


def integrate_weighted_power(grid, w, u, s):
    """Nodal quadrature of ``w |u|^s``, i.e. ``sum_i w_i |u_i|^s h``."""
    if s <= 0:
        raise InvalidArgumentError(f"exponent must be positive, got {s}")
    w = grid.check_field(w, "weight")
    u = grid.check_field(u)
    return float(np.sum(w * np.abs(u) ** s) * grid.h)


def signed_power(u, s):
    """``|u|^(s-2) u`` with the value 0 at ``u = 0``."""
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    nz = u != 0
    out[nz] = np.abs(u[nz]) ** (s - 1) * np.sign(u[nz])
    return out


def p_flux(d, p):
    """Edge flux ``|d|^(p-2) d``, regularized by ``FLUX_EPS`` when p < 2."""
    d = np.asarray(d, dtype=float)
    if p == 2:
        return d.copy()
    if p < 2:
        return (d * d + FLUX_EPS**2) ** ((p - 2) / 2) * d
    return np.abs(d) ** (p - 2) * d


def p_laplacian_weak(grid, u, p):
    """Weak discrete ``-Delta_p u`` at the nodes: ``flux_i - flux_{i+1}``.

    Multiplied by ``M`` this is exactly the node gradient of
    ``(1/p) M_hat(||u||^p)``.
    """
    flux = p_flux(edge_differences(grid, u), p)
    return flux[:-1] - flux[1:]


def field_to_csv(grid, u):
    """Render ``u`` as ``x,value`` rows including the boundary zeros."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["x", "value"])
    for x, v in zip(grid.all_nodes, grid.with_boundary(u)):
        writer.writerow([repr(float(x)), repr(float(v))])
    return buf.getvalue()


def field_from_csv(text):
    """Parse :func:`field_to_csv` output back into ``(grid, u)``."""
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    if not rows or rows[0] != ["x", "value"]:
        raise InvalidArgumentError("field CSV must start with an 'x,value' header")
    data = np.array([[float(a), float(b)] for a, b in rows[1:]])
    if data.shape[0] < 4:
        raise InvalidArgumentError("field CSV needs at least two interior nodes")
    if data[0, 1] != 0.0 or data[-1, 1] != 0.0:
        raise InvalidArgumentError("field CSV boundary values must be zero")
    grid = build_grid(data[-1, 0], data.shape[0] - 2)
    return grid, data[1:-1, 1].copy()
