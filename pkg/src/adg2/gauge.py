"""Discretized gauge fields on a product of a 3-d base box (or torus) with a
flat 4-torus fibre, against the constant standard fibre triple.

Connections are anti-Hermitian r x r matrix fields with one component per
coordinate direction; curvature comes from 2nd-order finite differences
(periodic wrap where the geometry is periodic, one-sided stencils at box
edges) plus the commutator term.  The residual conventions:

  * rho_fibre[i]  = coefficient of the vertical curvature against the i-th
    standard self-dual form (the fibrewise anti-self-duality defect);
  * rho_horiz[a]  = a-th component of sum_i I_i (contraction of the
    curvature with the i-th base direction, vertical part), the horizontal
    defect written as a fibre 1-form; its Hodge dual against the base volume
    reproduces the horizontal part of the structure-form equation.

The path functional cs_instanton integrates Tr(F ^ dA/dtau) against the
structure 4-form with the seven-manifold orientation -dt123 dx1234 (the
orientation the pointwise model fixes); with the product orientation the
associative-side comparison in the fueter module would fail by a sign.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

# standard fibre triple and anti-self-dual basis as float matrices
W_SD = np.zeros((3, 4, 4))
W_SD[0, 0, 1] = W_SD[0, 2, 3] = 1.0
W_SD[1, 0, 2] = 1.0
W_SD[1, 1, 3] = -1.0
W_SD[2, 0, 3] = W_SD[2, 1, 2] = 1.0
W_SD -= W_SD.swapaxes(1, 2)

W_ASD = np.zeros((3, 4, 4))
W_ASD[0, 0, 1], W_ASD[0, 2, 3] = 1.0, -1.0
W_ASD[1, 0, 2], W_ASD[1, 1, 3] = 1.0, 1.0
W_ASD[2, 0, 3], W_ASD[2, 1, 2] = 1.0, -1.0
W_ASD -= W_ASD.swapaxes(1, 2)

# I_i on fibre components (both on vectors and on 1-form coefficients)
I_VEC = -W_SD

# wedge pairing of fibre 2-forms in the (a<b) component order
PAIR_ORDER = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def wedge2_form(f_components, w: np.ndarray):
    """Pair a 2-form given by its 6 ordered components against a triple form."""
    (f01, f02, f03, f12, f13, f23) = f_components
    return (f01 * w[2, 3] + f23 * w[0, 1] - f02 * w[1, 3] - f13 * w[0, 2]
            + f03 * w[1, 2] + f12 * w[0, 3])


def thread_count() -> int:
    env = os.environ.get("ADG2_THREADS", "")
    try:
        return max(1, int(env))
    except ValueError:
        return 1


@dataclass
class LatticeGrid:
    dims_base: tuple[int, int, int]
    dims_fibre: tuple[int, int, int, int]
    spacing_base: tuple[float, float, float]
    spacing_fibre: tuple[float, float, float, float]
    base_periodic: bool = False
    fibre_periodic: bool = True

    def __post_init__(self):
        self.dims_base = tuple(int(n) for n in self.dims_base)
        self.dims_fibre = tuple(int(n) for n in self.dims_fibre)
        self.spacing_base = tuple(float(h) for h in self.spacing_base)
        self.spacing_fibre = tuple(float(h) for h in self.spacing_fibre)
        if len(self.dims_base) != 3 or len(self.dims_fibre) != 4:
            raise ValueError("grid needs 3 base and 4 fibre dimensions")
        if any(n < 3 for n in self.dims_base + self.dims_fibre):
            raise ValueError("need at least three nodes per axis")

    @staticmethod
    def unit(nb: int, nf: int, base_periodic=False, fibre_periodic=True) -> "LatticeGrid":
        hb = 1.0 / nb if base_periodic else 1.0 / (nb - 1)
        hf = 1.0 / nf if fibre_periodic else 1.0 / (nf - 1)
        return LatticeGrid((nb,) * 3, (nf,) * 4, (hb,) * 3, (hf,) * 4,
                           base_periodic, fibre_periodic)

    @property
    def shape(self):
        return self.dims_base + self.dims_fibre

    def spacing(self, direction: int) -> float:
        return (self.spacing_base[direction] if direction < 3
                else self.spacing_fibre[direction - 3])

    def periodic(self, direction: int) -> bool:
        return self.base_periodic if direction < 3 else self.fibre_periodic

    def coordinates(self):
        """Arrays t1,t2,t3,x1..x4 broadcastable over the node grid."""
        out = []
        for ax in range(7):
            n = self.shape[ax]
            h = self.spacing(ax)
            c = np.arange(n) * h
            shape = [1] * 7
            shape[ax] = n
            out.append(c.reshape(shape))
        return out

    def base_weights(self) -> np.ndarray:
        """Quadrature weights over base nodes (trapezoid on a box)."""
        w = np.ones(self.dims_base)
        if not self.base_periodic:
            for ax in range(3):
                sl = [slice(None)] * 3
                for end in (0, -1):
                    sl[ax] = end
                    w[tuple(sl)] *= 0.5
                sl[ax] = slice(None)
        return w * float(np.prod(self.spacing_base))

    def fibre_weights(self) -> np.ndarray:
        w = np.ones(self.dims_fibre)
        if not self.fibre_periodic:
            for ax in range(4):
                sl = [slice(None)] * 4
                for end in (0, -1):
                    sl[ax] = end
                    w[tuple(sl)] *= 0.5
                sl[ax] = slice(None)
        return w * float(np.prod(self.spacing_fibre))

    def node_weights(self) -> np.ndarray:
        return (self.base_weights().reshape(self.dims_base + (1, 1, 1, 1))
                * self.fibre_weights())


def diff(values: np.ndarray, h: float, axis: int, periodic: bool) -> np.ndarray:
    """2nd-order derivative along an axis of a node field."""
    if periodic:
        return (np.roll(values, -1, axis=axis) - np.roll(values, 1, axis=axis)) / (2 * h)
    return np.gradient(values, h, axis=axis, edge_order=2)


@dataclass
class LatticeConnection:
    """Anti-Hermitian connection components A_mu, mu = t1..t3, x1..x4."""

    grid: LatticeGrid
    components: np.ndarray  # (7, *grid.shape, r, r) complex

    def __post_init__(self):
        self.components = np.asarray(self.components, dtype=complex)
        want = (7,) + self.grid.shape
        if self.components.shape[:8] != want or self.components.ndim != 10:
            raise ValueError("components must have shape (7, grid, r, r)")
        if self.components.shape[-1] != self.components.shape[-2]:
            raise ValueError("matrix blocks must be square")

    @property
    def rank(self) -> int:
        return self.components.shape[-1]

    def check_anti_hermitian(self, tol=1e-12) -> bool:
        ah = self.components + np.conj(self.components.swapaxes(-1, -2))
        return float(np.abs(ah).max()) <= tol

    def deriv(self, comp: int, axis: int) -> np.ndarray:
        return diff(self.components[comp], self.grid.spacing(axis), axis,
                    self.grid.periodic(axis))

    def curvature(self, mu: int, nu: int) -> np.ndarray:
        """F_mu_nu = d_mu A_nu - d_nu A_mu + [A_mu, A_nu] at every node."""
        f = self.deriv(nu, mu) - self.deriv(mu, nu)
        if self.rank > 1:  # 1x1 blocks commute exactly
            a, b = self.components[mu], self.components[nu]
            f = f + a @ b - b @ a
        return f

    @staticmethod
    def zero(grid: LatticeGrid, rank: int = 1) -> "LatticeConnection":
        return LatticeConnection(
            grid, np.zeros((7,) + grid.shape + (rank, rank), dtype=complex))


def from_functions(grid: LatticeGrid, funcs, rank: int = 1) -> LatticeConnection:
    """Sample a dict {direction: f(t1,t2,t3,x1..x4) -> complex or matrix}."""
    coords = grid.coordinates()
    comps = np.zeros((7,) + grid.shape + (rank, rank), dtype=complex)
    for mu, f in funcs.items():
        val = np.asarray(f(*coords), dtype=complex)
        if val.ndim <= 7:  # scalar field times identity block
            val = np.broadcast_to(val, grid.shape)
            comps[mu] = val[..., None, None] * np.eye(rank)
        else:
            comps[mu] = np.broadcast_to(val, grid.shape + (rank, rank))
    return LatticeConnection(grid, comps)


def _fibre_curvatures(a: LatticeConnection):
    """The six vertical curvature components in PAIR_ORDER."""
    return [a.curvature(3 + p, 3 + q) for (p, q) in PAIR_ORDER]


def instanton_residual(a: LatticeConnection):
    """Defect fields of the limiting structure-form equation.

    Returns (rho_fibre, rho_horiz): complex matrix fields of shape
    (3, grid, r, r) and (4, grid, r, r).
    """
    f_vert = _fibre_curvatures(a)
    rho_fibre = np.stack([wedge2_form(f_vert, W_SD[i]) for i in range(3)])

    shape = a.grid.shape + (a.rank, a.rank)
    rho_horiz = np.zeros((4,) + shape, dtype=complex)
    for i in range(3):
        for b in range(4):
            fib = a.curvature(i, 3 + b)
            for out_a in range(4):
                coef = I_VEC[i][out_a, b]
                if coef:
                    rho_horiz[out_a] += coef * fib
    return rho_fibre, rho_horiz


def residual_scalars(rho: np.ndarray, rank: int) -> np.ndarray:
    """Real scalar view: imaginary part for rank 1, Frobenius norm otherwise."""
    if rank == 1:
        return rho[..., 0, 0].imag
    return np.sqrt(np.sum(np.abs(rho) ** 2, axis=(-2, -1)))


def higgs_covariant_vertical(a: LatticeConnection, phi: np.ndarray):
    """(d_A phi) in the four fibre directions; phi has shape (grid, r, r)."""
    out = np.zeros((4,) + phi.shape, dtype=complex)
    for b in range(4):
        out[b] = (diff(phi, a.grid.spacing(3 + b), 3 + b, a.grid.periodic(3 + b))
                  + a.components[3 + b] @ phi - phi @ a.components[3 + b])
    return out


def monopole_residual(a: LatticeConnection, phi: np.ndarray):
    """Residual of the coupled equation: the fibre part is the instanton
    rho_fibre; the horizontal part is rho_horiz minus the vertical covariant
    derivative of the Higgs field."""
    rho_fibre, rho_horiz = instanton_residual(a)
    return rho_fibre, rho_horiz - higgs_covariant_vertical(a, phi)


def twisted_hym_residual(a: LatticeConnection, b_form) -> np.ndarray:
    """Residual of the fibrewise constant-central-curvature equation:
    (i/2pi) F^{(0,2)} ^ w_i - <B ^ w_i> * Id, for a constant fibre 2-form B
    given by its six components in PAIR_ORDER."""
    b_form = np.asarray(b_form, dtype=float)
    if b_form.shape != (6,):
        if b_form.ndim >= 2 and b_form.shape[-1] == 6:
            flat = b_form.reshape(-1, 6)
            if not np.allclose(flat, flat[0], atol=1e-14):
                raise ValueError("the twist form must be constant on the flat "
                                 "fibre (harmonic representative)")
            b_form = flat[0]
        else:
            raise ValueError("twist form needs six components in pair order")
    f_vert = _fibre_curvatures(a)
    eye = np.eye(a.rank)
    out = np.zeros((3,) + a.grid.shape + (a.rank, a.rank), dtype=complex)
    for i in range(3):
        slope = wedge2_form(b_form, W_SD[i])
        out[i] = (1j / (2 * np.pi)) * wedge2_form(f_vert, W_SD[i]) - slope * eye
    return out


def central_trace_form(a: LatticeConnection) -> np.ndarray:
    """(i / 2 pi r) Tr F^{(0,2)} as six real component fields."""
    f_vert = _fibre_curvatures(a)
    tr = [np.trace(f, axis1=-2, axis2=-1) for f in f_vert]
    return np.stack([((1j / (2 * np.pi * a.rank)) * t).real for t in tr])


def slope_potential(b_form, h2_classes: np.ndarray, rank: int = 1) -> np.ndarray:
    """(1/r) <B ^ h(t)> per base node, for base-sampled second-cohomology
    classes h (shape (..., 6) in PAIR_ORDER)."""
    b_form = np.asarray(b_form, dtype=float)
    comp = np.moveaxis(np.asarray(h2_classes, dtype=float), -1, 0)
    pair = (b_form[0] * comp[5] + b_form[5] * comp[0]
            - b_form[1] * comp[4] - b_form[4] * comp[1]
            + b_form[2] * comp[3] + b_form[3] * comp[2])
    return pair / rank


@dataclass
class ConnectionPath:
    """Snapshots of a connection along a parameter in [0, 1]."""

    times: list
    fields: object  # sequence-like of LatticeConnection

    def __post_init__(self):
        self.times = [float(t) for t in self.times]
        if len(self.times) != len(self.fields):
            raise ValueError("one field per time sample")
        if sorted(self.times) != self.times:
            raise ValueError("times must be ascending")


def _cs_density(a: LatticeConnection, delta: np.ndarray) -> float:
    """Node-integrated Sum_l <T_l, w_l> for the segment increment delta."""
    w = a.grid.node_weights()
    f_vert = _fibre_curvatures(a)
    f_mix = [[a.curvature(l, 3 + b) for b in range(4)] for l in range(3)]
    pair_index = {p: k for k, p in enumerate(PAIR_ORDER)}
    total = 0.0
    for l in range(3):
        # T_l[ab] = Tr(F_{la} d_b - F_{lb} d_a + F_{ab} d_l), paired with w_l
        t6 = []
        for (p, q) in PAIR_ORDER:
            term = (np.trace(f_mix[l][p] @ delta[3 + q], axis1=-2, axis2=-1)
                    - np.trace(f_mix[l][q] @ delta[3 + p], axis1=-2, axis2=-1)
                    + np.trace(f_vert[pair_index[(p, q)]] @ delta[l],
                               axis1=-2, axis2=-1))
            t6.append(term)
        total += float(np.sum((w * wedge2_form(t6, W_SD[l])).real))
    return total


def cs_instanton(path: ConnectionPath, workers: int | None = None) -> float:
    """Path functional whose critical points are the limiting instantons.

    Trapezoid in the path parameter with the increment folded in (so the
    value is exactly invariant under reparametrizations that revisit the
    same connections), node quadrature in space, seven-manifold orientation
    -dt123 dx1234.
    """
    total = 0.0
    workers = workers if workers is not None else thread_count()
    segments = []
    for k in range(len(path.times) - 1):
        a0 = path.fields[k]
        a1 = path.fields[k + 1]
        delta = a1.components - a0.components
        segments.append((a0, a1, delta))

    def seg_value(seg):
        a0, a1, delta = seg
        return 0.5 * (_cs_density(a0, delta) + _cs_density(a1, delta))

    if workers > 1 and len(segments) > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            values = list(ex.map(seg_value, segments))
    else:
        values = [seg_value(seg) for seg in segments]
    total = float(np.sum(values))
    return -total / (4 * np.pi ** 2)


def gauge_transform(a: LatticeConnection, g: np.ndarray) -> LatticeConnection:
    """A -> g A g^-1 - (d g) g^-1 with a U(r) field g of shape (grid, r, r)."""
    ginv = np.conj(g.swapaxes(-1, -2))
    comps = np.empty_like(a.components)
    for mu in range(7):
        dg = diff(g, a.grid.spacing(mu), mu, a.grid.periodic(mu))
        comps[mu] = g @ a.components[mu] @ ginv - dg @ ginv
    return LatticeConnection(a.grid, comps)


# ----------------------------------------------------------------------------
# serialization


def field_to_json(a: LatticeConnection) -> dict:
    flat = np.stack([a.components.real, a.components.imag], axis=-1).ravel()
    return {
        "dims": {"base": list(a.grid.dims_base), "fibre": list(a.grid.dims_fibre)},
        "rank": a.rank,
        "spacing": {"base": list(a.grid.spacing_base),
                    "fibre": list(a.grid.spacing_fibre)},
        "periodic": {"base": a.grid.base_periodic, "fibre": a.grid.fibre_periodic},
        "values": flat.tolist(),
    }


def field_from_json(doc: dict) -> LatticeConnection:
    try:
        dims = doc["dims"]
        rank = int(doc["rank"])
        spacing = doc.get("spacing", {})
        periodic = doc.get("periodic", {})
        grid = LatticeGrid(
            tuple(dims["base"]), tuple(dims["fibre"]),
            tuple(spacing.get("base", [1.0 / max(1, n - 1) for n in dims["base"]])),
            tuple(spacing.get("fibre", [1.0 / n for n in dims["fibre"]])),
            bool(periodic.get("base", False)), bool(periodic.get("fibre", True)))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed field document: {exc}") from exc
    flat = np.asarray(doc["values"], dtype=float)
    want = 7 * int(np.prod(grid.shape)) * rank * rank * 2
    if flat.size != want:
        raise ValueError(f"/values has {flat.size} entries, expected {want}")
    pairs = flat.reshape((7,) + grid.shape + (rank, rank, 2))
    return LatticeConnection(grid, pairs[..., 0] + 1j * pairs[..., 1])


def path_to_json(path: ConnectionPath) -> dict:
    return {"times": list(path.times),
            "fields": [field_to_json(f) for f in path.fields]}


def path_from_json(doc: dict) -> ConnectionPath:
    if "times" not in doc or "fields" not in doc:
        raise ValueError("path document needs /times and /fields")
    fields = [field_from_json(f) for f in doc["fields"]]
    if len({f.grid.shape for f in fields}) > 1:
        raise ValueError("all path fields must share one grid")
    return ConnectionPath(list(doc["times"]), fields)
