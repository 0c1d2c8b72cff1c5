"""Sections of the flat dual-torus bundle over the base and their
quaternionic Dirac operator.

In the flat abelian model the fibrewise-flat connections on the 4-torus are
classified up to gauge by their fibre-averaged vertical components, living
on the dual torus; a lattice connection therefore induces a section of a
torus bundle over the base (holonomy_section).  The quaternionic Dirac
operator pairs base derivatives with the standard complex structures, and
its value matches the horizontal defect of the inducing connection.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gauge import I_VEC, W_SD, LatticeConnection, diff, residual_scalars

TWO_PI = 2.0 * np.pi


@dataclass
class FueterSectionGrid:
    """Base-sampled section with values in the fibre R^4 or its torus.

    period <= 0 means plain R^4 values; a positive period stores torus
    values as fundamental-domain representatives in [0, period).
    """

    values: np.ndarray  # (n1, n2, n3, 4)
    spacing: tuple[float, float, float]
    period: float = TWO_PI
    base_periodic: bool = False

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 4 or self.values.shape[-1] != 4:
            raise ValueError("values must have shape (n1, n2, n3, 4)")
        self.spacing = tuple(float(h) for h in self.spacing)
        self.period = float(self.period)
        if self.period > 0:
            self.values = np.mod(self.values, self.period)

    @property
    def dims(self):
        return self.values.shape[:3]

    def lifted(self) -> np.ndarray:
        """A smooth local lift of the torus values (unwrapped along each axis)."""
        v = self.values.copy()
        if self.period > 0:
            for ax in range(3):
                v = np.unwrap(v, axis=ax, period=self.period)
        return v

    def base_weights(self) -> np.ndarray:
        w = np.ones(self.dims)
        if not self.base_periodic:
            for ax in range(3):
                sl = [slice(None)] * 3
                for end in (0, -1):
                    sl[ax] = end
                    w[tuple(sl)] *= 0.5
                sl[ax] = slice(None)
        return w * float(np.prod(self.spacing))


def section_derivatives(s: FueterSectionGrid) -> np.ndarray:
    """(3, n1, n2, n3, 4) derivatives of the section.

    On a periodic base the wrap differences take the minimal torus image; on
    a box the values are unwrapped to a smooth lift first.
    """
    out = np.empty((3,) + s.values.shape)
    if s.base_periodic:
        v = s.values
        for i in range(3):
            d = np.roll(v, -1, axis=i) - np.roll(v, 1, axis=i)
            out[i] = minimal_image(d, s.period) / (2 * s.spacing[i])
    else:
        v = s.lifted()
        for i in range(3):
            out[i] = np.gradient(v, s.spacing[i], axis=i, edge_order=2)
    return out


def fueter_residual(s: FueterSectionGrid) -> np.ndarray:
    """Dirac defect sum_i I_i d_i s, shape (n1, n2, n3, 4)."""
    ds = section_derivatives(s)
    out = np.zeros_like(s.values)
    for i in range(3):
        out += ds[i] @ I_VEC[i].T
    return out


def minimal_image(delta: np.ndarray, period: float) -> np.ndarray:
    if period <= 0:
        return delta
    return np.mod(delta + period / 2, period) - period / 2


@dataclass
class SectionPath:
    times: list
    sections: list

    def __post_init__(self):
        self.times = [float(t) for t in self.times]
        if len(self.times) != len(self.sections):
            raise ValueError("one section per time sample")


def cs_associative(path: SectionPath, moduli_scale: float | None = None) -> float:
    """Path functional of sections against the canonical structure 4-form of
    the moduli bundle; for the flat dual-torus model the fibre triple is the
    standard one scaled by vol(fibre)/(4 pi^2).

    Trapezoid in the path parameter with increments folded in (exactly
    reparametrization independent), base quadrature in space.  Equals the
    connection-path functional for paths of fibrewise-flat abelian
    connections, which the test suite verifies.
    """
    kappa = moduli_scale if moduli_scale is not None else 1.0 / (4 * np.pi ** 2)
    total = 0.0
    for k in range(len(path.times) - 1):
        s0: FueterSectionGrid = path.sections[k]
        s1: FueterSectionGrid = path.sections[k + 1]
        delta = minimal_image(s1.values - s0.values, s0.period)

        def density(s: FueterSectionGrid) -> float:
            ds = section_derivatives(s)
            w = s.base_weights()
            val = 0.0
            for i in range(3):
                pairing = np.einsum("...a,ab,...b->...", ds[i], W_SD[i], delta)
                val += float(np.sum(w * pairing))
            return val

        total += 0.5 * (density(s0) + density(s1))
    return kappa * total


def holonomy_section(a: LatticeConnection, curvature_tol: float = 1e-6
                     ) -> FueterSectionGrid:
    """Fibre-averaged vertical connection components as a dual-torus section.

    Requires rank 1 and fibrewise-flat input: the vertical curvature defect
    must stay below curvature_tol (the class is ill-defined otherwise).
    """
    if a.rank != 1:
        raise ValueError("holonomy sections need a rank-1 connection")
    from .gauge import instanton_residual

    rho_fibre, _ = instanton_residual(a)
    worst = float(np.abs(residual_scalars(rho_fibre, 1)).max())
    # the self-dual pairing sees only half the components; check them all
    for p in range(4):
        for q in range(p + 1, 4):
            f = a.curvature(3 + p, 3 + q)
            worst = max(worst, float(np.abs(f).max()))
    if worst > curvature_tol:
        raise ValueError(
            f"connection is not fibrewise flat (defect {worst:.3e} exceeds "
            f"{curvature_tol:.1e}); the holonomy class is ill-defined")

    # components[3:] carries a leading component axis, then base, then fibre
    fibre_axes = (4, 5, 6, 7)
    avg = a.components[3:, ..., 0, 0].mean(axis=fibre_axes)
    vals = np.moveaxis(avg, 0, -1).imag  # divide by i
    lengths = [n * h for n, h in zip(a.grid.dims_fibre, a.grid.spacing_fibre)]
    if max(lengths) - min(lengths) > 1e-12:
        raise ValueError("anisotropic fibre tori are not supported here")
    period = TWO_PI / lengths[0]
    return FueterSectionGrid(vals, a.grid.spacing_base, period=period,
                             base_periodic=a.grid.base_periodic)


def holonomy_path(path_fields, times, **kwargs) -> SectionPath:
    return SectionPath(list(times), [holonomy_section(a, **kwargs) for a in path_fields])


# ----------------------------------------------------------------------------
# serialization


def section_to_json(s: FueterSectionGrid) -> dict:
    return {
        "dims": list(s.dims),
        "spacing": list(s.spacing),
        "period": s.period,
        "base_periodic": s.base_periodic,
        "values": s.values.reshape(-1, 4).tolist(),
    }


def section_from_json(doc: dict) -> FueterSectionGrid:
    for key in ("dims", "spacing", "values"):
        if key not in doc:
            raise ValueError(f"section document missing /{key}")
    dims = tuple(int(n) for n in doc["dims"])
    vals = np.asarray(doc["values"], dtype=float)
    if vals.shape != (int(np.prod(dims)), 4):
        raise ValueError("/values has the wrong shape for /dims")
    return FueterSectionGrid(vals.reshape(dims + (4,)), tuple(doc["spacing"]),
                             float(doc.get("period", TWO_PI)),
                             bool(doc.get("base_periodic", False)))
