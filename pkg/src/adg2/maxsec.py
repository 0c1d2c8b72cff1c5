"""Positive sections of a signature-(3,19) pairing over a 3-d box and the
discrete area functional whose critical points are the maximal sections.

A section is sampled on a rectangular grid with values in R^22 and extended
by trilinear interpolation.  The area integrand det^(1/3) of the derivative
Gram matrix is integrated cell by cell with the full 2x2x2 Gauss rule on
the interpolant.  Two properties of this discretization carry the test
suite: affine sections are exactly critical (the integral of the gradient
of an interior-supported perturbation vanishes element-wise), and the rule
has no hourglass modes (checkerboard perturbations are visible at the
off-center Gauss points), so the discrete critical point with affine
boundary data is the affine section itself.  grad_area assembles the exact
gradient of the discrete functional, so the solver converges to genuine
discrete critical points and the finite-difference oracle matches it to
rounding.

The residual norm reported by the solver is isometry-invariant: at each
interior node the Q-dual gradient vector is measured in the positive
definite metric that agrees with Q on the tangent 3-plane of the section
and with -Q on its Q-orthogonal complement.  Composing the section with any
Q-isometry leaves this norm unchanged, which is the computable form of the
duality statement for maximal sections.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np

DIM = 22
SIG_PLUS = 3


class PositivityError(ValueError):
    def __init__(self, node, min_eig):
        self.node = tuple(int(i) for i in node)
        self.min_eig = float(min_eig)
        super().__init__(
            f"derivative Gram matrix not positive definite at node {self.node}"
            f" (min eigenvalue {self.min_eig:.3e})")


class SolveError(RuntimeError):
    pass


def standard_pairing() -> np.ndarray:
    q = -np.eye(DIM)
    q[:SIG_PLUS, :SIG_PLUS] = np.eye(SIG_PLUS)
    return q


def check_pairing(q: np.ndarray) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    if q.shape != (DIM, DIM) or not np.allclose(q, q.T, atol=1e-12):
        raise ValueError("pairing must be a symmetric 22x22 matrix")
    eig = np.linalg.eigvalsh(q)
    if np.sum(eig > 0) != SIG_PLUS or np.sum(eig < 0) != DIM - SIG_PLUS:
        raise ValueError("pairing must have signature (3,19)")
    return q


@dataclass
class SectionGrid:
    """Grid-sampled map from a box in R^3 to R^22, paired by Q."""

    values: np.ndarray  # (n1, n2, n3, 22)
    spacing: tuple[float, float, float]
    pairing: np.ndarray = field(default_factory=standard_pairing)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 4 or self.values.shape[-1] != DIM:
            raise ValueError("values must have shape (n1, n2, n3, 22)")
        if any(n < 3 for n in self.values.shape[:3]):
            raise ValueError("need at least three nodes per axis")
        self.spacing = tuple(float(h) for h in self.spacing)
        if any(h <= 0 for h in self.spacing):
            raise ValueError("spacings must be positive")
        self.pairing = check_pairing(self.pairing)

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.values.shape[:3]

    def copy(self) -> "SectionGrid":
        out = SectionGrid.__new__(SectionGrid)
        out.values = self.values.copy()
        out.spacing = self.spacing
        out.pairing = self.pairing
        return out

    def interior_mask(self) -> np.ndarray:
        m = np.zeros(self.dims, dtype=bool)
        m[1:-1, 1:-1, 1:-1] = True
        return m


_CORNERS = [(o1, o2, o3) for o1 in (0, 1) for o2 in (0, 1) for o3 in (0, 1)]
_GAUSS_1D = (0.5 - 0.5 / np.sqrt(3.0), 0.5 + 0.5 / np.sqrt(3.0))
_GAUSS_PTS = [(a, b, c) for a in _GAUSS_1D for b in _GAUSS_1D for c in _GAUSS_1D]


_TABLE_CACHE: dict = {}


def _shape_gradient_table(spacing) -> np.ndarray:
    """d(N_corner)/d(t_axis) at each Gauss point of the unit cell.

    Shape (8 gauss, 8 corners, 3 axes); trilinear shape functions
    N_o(xi) = prod_d (xi_d if o_d else 1 - xi_d).
    """
    key = tuple(spacing)
    cached = _TABLE_CACHE.get(key)
    if cached is not None:
        return cached
    table = np.empty((8, 8, 3))
    for gi, xi in enumerate(_GAUSS_PTS):
        for ci, o in enumerate(_CORNERS):
            for ax in range(3):
                val = 1.0
                for d in range(3):
                    if d == ax:
                        val *= (1.0 if o[d] else -1.0) / spacing[d]
                    else:
                        val *= xi[d] if o[d] else 1.0 - xi[d]
                table[gi, ci, ax] = val
    _TABLE_CACHE[key] = table
    return table


def _det3(g: np.ndarray) -> np.ndarray:
    return (g[..., 0, 0] * (g[..., 1, 1] * g[..., 2, 2] - g[..., 1, 2] * g[..., 2, 1])
            - g[..., 0, 1] * (g[..., 1, 0] * g[..., 2, 2] - g[..., 1, 2] * g[..., 2, 0])
            + g[..., 0, 2] * (g[..., 1, 0] * g[..., 2, 1] - g[..., 1, 1] * g[..., 2, 0]))


def _inv3(g: np.ndarray, det: np.ndarray) -> np.ndarray:
    out = np.empty_like(g)
    out[..., 0, 0] = g[..., 1, 1] * g[..., 2, 2] - g[..., 1, 2] * g[..., 2, 1]
    out[..., 0, 1] = g[..., 0, 2] * g[..., 2, 1] - g[..., 0, 1] * g[..., 2, 2]
    out[..., 0, 2] = g[..., 0, 1] * g[..., 1, 2] - g[..., 0, 2] * g[..., 1, 1]
    out[..., 1, 0] = g[..., 1, 2] * g[..., 2, 0] - g[..., 1, 0] * g[..., 2, 2]
    out[..., 1, 1] = g[..., 0, 0] * g[..., 2, 2] - g[..., 0, 2] * g[..., 2, 0]
    out[..., 1, 2] = g[..., 0, 2] * g[..., 1, 0] - g[..., 0, 0] * g[..., 1, 2]
    out[..., 2, 0] = g[..., 1, 0] * g[..., 2, 1] - g[..., 1, 1] * g[..., 2, 0]
    out[..., 2, 1] = g[..., 0, 1] * g[..., 2, 0] - g[..., 0, 0] * g[..., 2, 1]
    out[..., 2, 2] = g[..., 0, 0] * g[..., 1, 1] - g[..., 0, 1] * g[..., 1, 0]
    return out / det[..., None, None]


def _corner_view(values: np.ndarray, offset) -> np.ndarray:
    n1, n2, n3 = values.shape[:3]
    o1, o2, o3 = offset
    return values[o1:n1 - 1 + o1, o2:n2 - 1 + o2, o3:n3 - 1 + o3]


def _corner_stack(values: np.ndarray) -> np.ndarray:
    """(cells..., 8 corners, 22) view of the nodal values."""
    return np.stack([_corner_view(values, o) for o in _CORNERS], axis=-2)


def node_diff(values: np.ndarray, h: float, axis: int) -> np.ndarray:
    """Nodewise derivative (central inside, one-sided at the ends); used only
    for per-node frames, not for the area functional."""
    return np.gradient(values, h, axis=axis, edge_order=2)


def _gram(s: SectionGrid):
    """Derivatives of the interpolant at the Gauss points, their Q-pairings,
    and the Gram matrices; leading shape (cells..., 8 gauss)."""
    table = _shape_gradient_table(s.spacing)
    corners = _corner_stack(s.values)
    # contract the corner index with one matmul: (24, 8c) @ (cells, 8c, 22)
    t2 = np.ascontiguousarray(table.transpose(0, 2, 1).reshape(24, 8))
    dh = (t2 @ corners).reshape(corners.shape[:3] + (8, 3, DIM))
    qd = dh @ s.pairing
    g = dh @ qd.swapaxes(-1, -2)
    return dh, qd, g


def _check_positive(g: np.ndarray):
    """Sylvester criterion at every quadrature point; cheap and vectorized."""
    m1 = g[..., 0, 0]
    m2 = g[..., 0, 0] * g[..., 1, 1] - g[..., 0, 1] * g[..., 1, 0]
    m3 = _det3(g)
    bad = (m1 <= 0) | (m2 <= 0) | (m3 <= 0)
    if np.any(bad):
        # report with the actual minimal eigenvalue for the diagnostic
        eig = np.linalg.eigvalsh(g[bad])
        node = np.unravel_index(np.argmax(bad), bad.shape)
        raise PositivityError(node, float(eig[..., 0].min()))
    return m3


def min_gram_eigenvalue(s: SectionGrid) -> float:
    _, _, g = _gram(s)
    return float(np.linalg.eigvalsh(g)[..., 0].min())


def area(s: SectionGrid) -> float:
    """Gauss quadrature of det^(1/3) of the derivative Gram matrices."""
    _, _, g = _gram(s)
    det = _check_positive(g)
    gp_weight = float(np.prod(s.spacing)) / 8.0
    return float(np.sum(det ** (1.0 / 3.0)) * gp_weight)


def grad_area(s: SectionGrid) -> np.ndarray:
    """Exact gradient of the discrete area w.r.t. interior node values.

    Returns an array shaped like values with zeros at boundary nodes (their
    values are Dirichlet data).
    """
    dh, qd, g = _gram(s)
    det = _check_positive(g)
    det13 = det ** (1.0 / 3.0)
    ginv = _inv3(g, det)
    w = (float(np.prod(s.spacing)) / 8.0) * det13 * (2.0 / 3.0)
    m = (w[..., None, None] * ginv) @ qd
    table = _shape_gradient_table(s.spacing)
    # contract gauss and axis with one matmul: (8c, 24) @ (cells, 24, 22)
    t3 = np.ascontiguousarray(table.transpose(1, 0, 2).reshape(8, 24))
    cells = t3 @ m.reshape(m.shape[:3] + (24, DIM))
    grad = np.zeros_like(s.values)
    n1, n2, n3 = s.values.shape[:3]
    for ci, (o1, o2, o3) in enumerate(_CORNERS):
        grad[o1:n1 - 1 + o1, o2:n2 - 1 + o2, o3:n3 - 1 + o3] += cells[..., ci, :]
    mask = s.interior_mask()
    grad[~mask] = 0.0
    return grad


def q_dual(s: SectionGrid, covector_field: np.ndarray) -> np.ndarray:
    return covector_field @ np.linalg.inv(s.pairing).T


def residual_norm(s: SectionGrid, grad: np.ndarray | None = None) -> float:
    """Isometry-invariant sup norm of the Q-dual gradient over interior nodes.

    The gradient is first converted to a density (divided by the lumped node
    volume), so the tolerance means the same thing on every grid; the
    per-node norm then uses the positive definite metric adapted to the
    section: Q on the span of the nodewise derivatives, -Q on its
    Q-complement.  Every construction step commutes with Q-isometries, so
    composing the section with one leaves the value unchanged exactly.
    """
    if grad is None:
        grad = grad_area(s)
    dh = [node_diff(s.values, s.spacing[i], i) for i in range(3)]
    v = np.stack(dh, axis=-1)  # (..., 22, 3)
    qv = v.swapaxes(-1, -2) @ s.pairing
    g = qv @ v
    mass = float(np.prod(s.spacing))
    gd = q_dual(s, grad) / mass
    det = _det3(g)
    coef = _inv3(g, det) @ (qv @ gd[..., None])
    plus = (v @ coef)[..., 0]
    minus = gd - plus
    sq = (np.sum((plus @ s.pairing) * plus, axis=-1)
          - np.sum((minus @ s.pairing) * minus, axis=-1))
    sq = np.where(sq < 0, 0.0, sq)
    mask = s.interior_mask()
    return float(np.sqrt(sq[mask].max())) if mask.any() else 0.0


def base_metric(s: SectionGrid):
    """Base metric (half the Gram matrix) and its volume density, at the
    quadrature cells."""
    _, _, g = _gram(s)
    _check_positive(g)
    gb = 0.5 * g
    dens = np.sqrt(np.linalg.det(gb))
    return gb, dens


class MuMap:
    """A linear map preserving the pairing; composition acts nodewise."""

    def __init__(self, matrix: np.ndarray, pairing: np.ndarray | None = None,
                 tol: float = 1e-12):
        self.matrix = np.asarray(matrix, dtype=float)
        q = standard_pairing() if pairing is None else check_pairing(pairing)
        if self.matrix.shape != (DIM, DIM):
            raise ValueError("isometry must be a 22x22 matrix")
        resid = self.matrix.T @ q @ self.matrix - q
        scale = max(1.0, float(np.abs(q).max()))
        if np.abs(resid).max() > tol * scale * 100:
            raise ValueError(
                f"matrix is not a Q-isometry (defect {np.abs(resid).max():.3e})")
        self.pairing = q

    @staticmethod
    def identity() -> "MuMap":
        return MuMap(np.eye(DIM))

    @staticmethod
    def random(rng: np.random.Generator, n_boosts: int = 3,
               rapidity: float = 0.4) -> "MuMap":
        """Random isometry of the standard pairing: O(3) x O(19) plus boosts."""
        m = np.eye(DIM)
        o3, _ = np.linalg.qr(rng.normal(size=(SIG_PLUS, SIG_PLUS)))
        o19, _ = np.linalg.qr(rng.normal(size=(DIM - SIG_PLUS, DIM - SIG_PLUS)))
        m[:SIG_PLUS, :SIG_PLUS] = o3
        m[SIG_PLUS:, SIG_PLUS:] = o19
        for _ in range(n_boosts):
            p = rng.integers(0, SIG_PLUS)
            n = rng.integers(SIG_PLUS, DIM)
            t = rng.uniform(-rapidity, rapidity)
            b = np.eye(DIM)
            b[p, p] = b[n, n] = np.cosh(t)
            b[p, n] = b[n, p] = np.sinh(t)
            m = b @ m
        return MuMap(m)


def dualize(s: SectionGrid, psi: MuMap) -> SectionGrid:
    """Nodewise composition with an isometry; positivity is preserved."""
    if not np.allclose(psi.pairing, s.pairing, atol=1e-10):
        raise ValueError("isometry and grid use different pairings")
    out = SectionGrid(s.values @ psi.matrix.T, s.spacing, s.pairing)
    _check_positive(_gram(out)[2])
    return out


def affine_section(dims, spacing, frame: np.ndarray | None = None,
                   offset: np.ndarray | None = None,
                   pairing: np.ndarray | None = None) -> SectionGrid:
    """h(t) = frame @ t + offset with Q-orthonormal positive frame columns."""
    q = standard_pairing() if pairing is None else check_pairing(pairing)
    if frame is None:
        frame = np.zeros((DIM, 3))
        frame[:SIG_PLUS, :] = np.eye(3)
    frame = np.asarray(frame, dtype=float)
    offset = np.zeros(DIM) if offset is None else np.asarray(offset, dtype=float)
    axes = [np.arange(n) * h for n, h in zip(dims, spacing)]
    tt = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
    vals = tt @ frame.T + offset
    return SectionGrid(vals, spacing, q)


@dataclass
class SolveResult:
    grid: SectionGrid
    converged: bool
    iterations: int
    residual: float
    history: list  # rows (iter, area, grad_inf_norm, min_eig_G)
    message: str = ""


def solve_dirichlet(init: SectionGrid, tol: float = 1e-8, max_iter: int = 500,
                    boundary: np.ndarray | None = None,
                    newton: bool = True) -> SolveResult:
    """Drive the interior nodes to a discrete critical point of the area.

    Boundary values are taken from `boundary` (defaults to the initial grid)
    and held fixed.  The base iteration is damped gradient ascent with a
    spectral step estimate, halving the step whenever positivity fails or
    the residual grows past the recent worst; with newton=True each step
    instead solves the Newton system approximately by conjugate gradients on
    exact-gradient differences, which cuts the iteration count by orders of
    magnitude near the solution.
    """
    s = init.copy()
    if boundary is not None:
        mask = s.interior_mask()
        s.values[~mask] = np.asarray(boundary, dtype=float)[~mask]
    mask = s.interior_mask()

    g = grad_area(s)
    res = residual_norm(s, g)
    history = [(0, area(s), res, min_gram_eigenvalue(s))]
    if res <= tol:
        return SolveResult(s, True, 0, res, history)

    step = 1.0
    prev_vals = None
    prev_grad = None
    recent = [res]
    n_iter = 0
    for n_iter in range(1, max_iter + 1):
        delta = _newton_direction(s, g, mask) if newton else None
        if delta is None:
            if prev_vals is not None:
                dv = (s.values - prev_vals)[mask]
                dg = (g - prev_grad)[mask]
                denom = float(np.sum(dv * dg))
                if denom < 0:
                    step = float(np.sum(dv * dv) / -denom)
                step = min(max(step, 1e-6), 1e3)
            delta = step * g

        prev_vals, prev_grad = s.values.copy(), g.copy()
        accepted = False
        shrink = 1.0
        bar = max(recent[-8:])
        for _ in range(60):
            trial = s.copy()
            trial.values[mask] += shrink * delta[mask]
            try:
                g_trial = grad_area(trial)
                res_trial = residual_norm(trial, g_trial)
            except PositivityError:
                shrink *= 0.5
                if shrink < 1e-10:
                    raise SolveError(
                        f"positivity lost at minimum step (iteration {n_iter}, "
                        f"residual {res:.3e})")
                continue
            if res_trial < bar or shrink < 1e-6:
                s, g, res = trial, g_trial, res_trial
                accepted = True
                break
            shrink *= 0.5
        if not accepted:
            raise SolveError(
                f"no acceptable step at iteration {n_iter} (residual {res:.3e})")
        recent.append(res)
        history.append((n_iter, area(s), res, min_gram_eigenvalue(s)))
        if res <= tol:
            return SolveResult(s, True, n_iter, res, history)
    return SolveResult(s, False, n_iter, res, history,
                       message=f"max_iter reached with residual {res:.3e}")


def _hessian_cache(s: SectionGrid):
    dh, qd, g = _gram(s)
    det = _check_positive(g)
    det13 = det ** (1.0 / 3.0)
    ginv = _inv3(g, det)
    c = (float(np.prod(s.spacing)) / 8.0) * (2.0 / 3.0)
    w13 = c * det13[..., None, None]
    return dh, qd, ginv, ginv @ qd, w13


def _hessian_apply(s: SectionGrid, cache, delta: np.ndarray) -> np.ndarray:
    """Exact directional derivative of -grad_area along delta (so the
    returned operator is positive definite near a discrete maximum)."""
    dh, qd, ginv, gq, w13 = cache
    table = _shape_gradient_table(s.spacing)
    t2 = np.ascontiguousarray(table.transpose(0, 2, 1).reshape(24, 8))
    corners = _corner_stack(delta)
    dd = (t2 @ corners).reshape(corners.shape[:3] + (8, 3, DIM))
    qdelta = (dd.reshape(-1, DIM) @ s.pairing).reshape(dd.shape)
    half = dd @ qd.swapaxes(-1, -2)
    dgram = half + half.swapaxes(-1, -2)
    tr = np.einsum("...ab,...ba->...", ginv, dgram)
    inner = qdelta - dgram @ gq
    dm = w13 * ((tr / 3.0)[..., None, None] * gq + ginv @ inner)
    t3 = np.ascontiguousarray(table.transpose(1, 0, 2).reshape(8, 24))
    cells = t3 @ dm.reshape(dm.shape[:3] + (24, DIM))
    out = np.zeros_like(delta)
    n1, n2, n3 = delta.shape[:3]
    for ci, (o1, o2, o3) in enumerate(_CORNERS):
        out[o1:n1 - 1 + o1, o2:n2 - 1 + o2, o3:n3 - 1 + o3] += cells[..., ci, :]
    out[0], out[-1] = 0.0, 0.0
    out[:, 0], out[:, -1] = 0.0, 0.0
    out[:, :, 0], out[:, :, -1] = 0.0, 0.0
    return -out


def _section_frame_basis(s: SectionGrid):
    """Columns [A | N]: the (Q-orthonormalized) mean derivative 3-frame of
    the section and a Q-orthonormal basis of its Q-complement."""
    dh, _, _ = _gram(s)
    a = dh.mean(axis=(0, 1, 2, 3)).T  # (22, 3)
    ga = a.T @ s.pairing @ a
    a = a @ np.linalg.inv(np.linalg.cholesky(ga).T)
    w, u = np.linalg.eigh(s.pairing)
    neg = u[:, w < 0]
    proj = np.eye(DIM) - a @ (a.T @ s.pairing)
    n = proj @ neg
    gn = -(n.T @ s.pairing @ n)
    n = n @ np.linalg.inv(np.linalg.cholesky(gn).T)
    return a, n


def _split_preconditioner(s: SectionGrid):
    """Positive definite approximation of |Hessian|^-1.

    In the frame/complement coordinates the leading Hessian blocks at a
    near-affine section are (2/9) times the axis-m 1-d Laplacian on the m-th
    frame coefficient and (2/3) times the full Laplacian on the complement;
    both are inverted spectrally with sine transforms on the interior.
    """
    from scipy import fft as sfft

    n1, n2, n3 = s.dims
    lam_ax = []
    for (n, h) in zip(s.dims, s.spacing):
        k = np.arange(1, n - 1)
        lam_ax.append((4.0 / h ** 2) * np.sin(np.pi * k / (2.0 * (n - 1))) ** 2)
    lam_full = (lam_ax[0][:, None, None] + lam_ax[1][None, :, None]
                + lam_ax[2][None, None, :])
    a, nbasis = _section_frame_basis(s)
    t = np.concatenate([a, nbasis], axis=1)  # (22, 22)

    def apply(r: np.ndarray) -> np.ndarray:
        rc = r[1:-1, 1:-1, 1:-1] @ t
        spec = sfft.dstn(rc, type=1, axes=(0, 1, 2))
        for m in range(3):
            shape = [1, 1, 1]
            shape[m] = len(lam_ax[m])
            spec[..., m] /= (2.0 / 9.0) * lam_ax[m].reshape(shape)
        spec[..., 3:] /= (2.0 / 3.0) * lam_full[..., None]
        sol = sfft.idstn(spec, type=1, axes=(0, 1, 2))
        out = np.zeros_like(r)
        out[1:-1, 1:-1, 1:-1] = sol @ t.T
        return out

    return apply


def _newton_direction(s: SectionGrid, g: np.ndarray, mask: np.ndarray,
                      max_kry: int = 60):
    """Approximately solve H delta = g with H = -Hessian (exact analytic
    Hessian-vector products).  The Hessian is indefinite in general (the
    critical sections are saddles of the discrete area in the tangential
    compression modes), so the Krylov solver is MINRES with the positive
    definite split preconditioner."""
    from scipy.sparse import linalg as sla

    gnorm = float(np.abs(g[mask]).max())
    if gnorm == 0.0:
        return None
    cache = _hessian_cache(s)
    precond = _split_preconditioner(s)
    shape = g.shape

    def matvec(x):
        vec = np.zeros(shape)
        vec[mask] = x.reshape(shape)[mask]
        out = _hessian_apply(s, cache, vec)
        out[~mask] = 0.0
        return out.ravel()

    def psolve(x):
        out = precond(x.reshape(shape))
        out[~mask] = 0.0
        return out.ravel()

    ndof = int(np.prod(shape))
    a_op = sla.LinearOperator((ndof, ndof), matvec=matvec)
    m_op = sla.LinearOperator((ndof, ndof), matvec=psolve)
    b = np.where(mask[..., None], g, 0.0).ravel()
    try:
        x, _ = sla.minres(a_op, b, M=m_op, rtol=2e-2, maxiter=max_kry)
    except TypeError:  # older scipy spells the tolerance "tol"
        x, _ = sla.minres(a_op, b, M=m_op, tol=2e-2, maxiter=max_kry)
    x = x.reshape(shape)
    x[~mask] = 0.0
    if not np.isfinite(x).all() or float(np.abs(x[mask]).max()) == 0.0:
        return None
    return x


# ----------------------------------------------------------------------------
# serialization


def grid_to_json(s: SectionGrid) -> dict:
    return {
        "dims": list(s.dims),
        "spacing": list(s.spacing),
        "Q": s.pairing.tolist(),
        "nodes": s.values.reshape(-1, DIM).tolist(),
    }


def grid_from_json(doc: dict) -> SectionGrid:
    for key in ("dims", "spacing", "Q", "nodes"):
        if key not in doc:
            raise ValueError(f"grid document missing /{key}")
    dims = tuple(int(n) for n in doc["dims"])
    nodes = np.asarray(doc["nodes"], dtype=float)
    if nodes.shape != (int(np.prod(dims)), DIM):
        raise ValueError("/nodes has the wrong shape for /dims")
    return SectionGrid(nodes.reshape(dims + (DIM,)), tuple(doc["spacing"]),
                       np.asarray(doc["Q"], dtype=float))


def write_json_atomic(path: str, doc: dict):
    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(doc, fh)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def history_to_csv(path: str, history) -> None:
    import csv

    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["iter", "area", "grad_inf_norm", "min_eig_G"])
            for row in history:
                writer.writerow([row[0], f"{row[1]:.17g}", f"{row[2]:.17g}",
                                 f"{row[3]:.17g}"])
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
