"""Left-invariant conformal foliations by geodesics.

A unit vector ``u`` in the algebra spans a foliation of the group by
geodesics exactly when ``nabla_u u = 0``, and that foliation is conformal
exactly when the horizontal shape matrix ``B[a,b] = <nabla_{h_a} u, h_b>``
(for an orthonormal horizontal frame ``h_1, h_2``) has trace-free symmetric
part zero.  Both defects are measured by residuals:

    geodesic_residual(u) = |nabla_u u|
    conformal_residual(u) = sqrt((s11 - s22)^2 + s12^2),
        s11 = B[0,0], s22 = B[1,1], s12 = B[0,1] + B[1,0]

Such a direction is precisely what a harmonic morphism from the group to a
surface needs.  Away from constant curvature every conformal foliation by
geodesics is left-invariant, so the group admits one iff some unit direction
zeroes both residuals; constant-curvature metrics admit a continuum of them
(not all left-invariant) and are handled as a special case.  The search
scans a
deterministic Fibonacci lattice on the unit sphere and polishes candidate
minima of the total squared residual with a damped Gauss-Newton iteration;
results are antipodally deduplicated.  Non-constant-curvature metrics can
carry at most two such directions, and at most one when the Ricci spectrum
has exactly two distinct eigenvalues, so short direction lists are expected.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .algebra import (
    JACOBI_TOL,
    MetricSpec,
    NotLieAlgebraError,
    StructureConstants,
    change_basis,
    constants_from_brackets,
    jacobi_residual,
    orthonormal_frame,
    orthonormalize,
)
from .bianchi import BianchiType
from .geometry import connection, curvature

__all__ = [
    "LATTICE_DEFAULT",
    "ACCEPT_RESIDUAL_SQ",
    "COARSE_FILTER",
    "CLUSTER_ANGLE",
    "FoliationCandidate",
    "FoliationReport",
    "AdaptedBracketParams",
    "FoliationFamily",
    "residuals",
    "search_directions",
    "adapt_basis",
    "adapted_constants",
    "jacobi_constraints",
    "classify_family",
    "enumerate_families",
    "random_metrics",
    "admits_harmonic_morphism",
]

LATTICE_DEFAULT = 20000

# A refined direction is accepted when its squared total residual
# (geodesic^2 + conformal^2) falls below this.
ACCEPT_RESIDUAL_SQ = 1e-14

# Lattice points below this squared residual are always refined.
COARSE_FILTER = 1e-4

# The best this many lattice points are refined regardless of the coarse
# filter, so basins whose lattice samples sit above the filter still get
# polished.
TOPK_REFINE = 32

# The top-K supplement only runs when the lattice minimum is small enough to
# plausibly hide a true zero.  Near a zero of the residual vector v the
# squared residual grows like |J|^2 d^2 with |J| a few times the bracket
# norm and d the lattice covering radius (~0.013 rad at 20000 points), so a
# genuine zero always drags some lattice value below a small multiple of
# |c|^2; minima far above that cannot be polished to zero and are skipped.
_TOPK_TRIGGER = 3e-2

# Gauss-Newton converges superlinearly onto an actual zero, so a polish that
# is still above this squared residual after this many iterations is circling
# a positive-valued local minimum and is abandoned.
_STALL_ITER = 10
_STALL_RESIDUAL_SQ = 1e-8

# Hard cap on refinement starts (protects against near-degenerate metrics
# whose residual landscape is globally tiny).
MAX_CANDIDATES = 512

# Candidate starts closer than this (radians, antipodally identified) are
# considered the same basin and only the best is refined.
PRE_CLUSTER_ANGLE = 0.05

# Accepted directions closer than this (radians, antipodally identified)
# merge into one.
CLUSTER_ANGLE = 1e-4

NEWTON_MAX_ITER = 50
_FD_STEP = 1e-6

_COEFF_NAMES = ("a", "b", "x", "y", "z")


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class FoliationCandidate:
    """One unit direction spanning a conformal foliation by geodesics."""

    direction: np.ndarray
    geodesic_residual: float
    conformal_residual: float

    def __post_init__(self):
        object.__setattr__(self, "direction", _readonly(self.direction))

    @property
    def total_residual_sq(self) -> float:
        return self.geodesic_residual**2 + self.conformal_residual**2


@dataclass(frozen=True)
class FoliationReport:
    """Search outcome for one orthonormalized metric.

    Constant-curvature metrics short-circuit: a space form carries a
    continuum of conformal foliations by geodesics (not all of them
    left-invariant), so the list is left empty and ``admits`` is true.
    Otherwise ``admits`` is true exactly when the (deduplicated, antipodally
    identified) direction list is nonempty.
    """

    constant_curvature: bool
    directions: tuple[FoliationCandidate, ...]
    admits: bool
    lattice_min_residual: float | None
    lattice_size: int


@dataclass(frozen=True)
class AdaptedBracketParams:
    """Bracket coefficients in a frame adapted to a foliation direction Z:

        [X,Y] = x X + y Y + z Z,   [Z,X] = a X + b Y,   [Z,Y] = -b X + a Y

    Instances are plain parameter tuples; nothing is enforced here, so the
    Jacobi constraints (a z = 0, a x + b y = 0, b x - a y = 0) can be probed
    with :func:`jacobi_constraints` on arbitrary values.  Coefficients read
    off an actual foliation direction of a Lie algebra always satisfy them.
    """

    a: float
    b: float
    x: float
    y: float
    z: float

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.a, self.b, self.x, self.y, self.z)


@dataclass(frozen=True)
class FoliationFamily:
    """One solution family of the Jacobi constraints in the adapted frame."""

    name: str
    zero_coefficients: tuple[str, ...]
    free_coefficients: tuple[str, ...]
    attainable_types: frozenset[str]

    def sample(self, rng: np.random.Generator) -> AdaptedBracketParams:
        """Draw random coefficients with the family's zeros pinned."""
        values = dict.fromkeys(_COEFF_NAMES, 0.0)
        for name in self.free_coefficients:
            values[name] = float(rng.standard_normal())
        return AdaptedBracketParams(**values)


@lru_cache(maxsize=4)
def _lattice(n: int):
    """Deterministic Fibonacci lattice on the sphere, with frames."""
    i = np.arange(n, dtype=float)
    z = 1.0 - (2.0 * i + 1.0) / n
    golden = (1.0 + np.sqrt(5.0)) / 2.0
    phi = (2.0 * np.pi) * np.mod(i / golden, 1.0)
    rho = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    points = np.stack([rho * np.cos(phi), rho * np.sin(phi), z], axis=1)
    h1, h2 = _frames(points)
    return _readonly(points), _readonly(h1), _readonly(h2)


def _frames(points: np.ndarray):
    """Batched version of algebra.orthonormal_frame (same tie rule)."""
    least = np.argmin(np.abs(points), axis=1)
    axes = np.eye(3)[least]
    h1 = np.cross(axes, points)
    h1 = h1 / np.linalg.norm(h1, axis=1, keepdims=True)
    h2 = np.cross(points, h1)
    return h1, h2


def _components(gamma: np.ndarray, u: np.ndarray, h1: np.ndarray, h2: np.ndarray):
    """Residual component vectors (g1, g2, s11 - s22, s12), batched."""
    du = np.einsum("ijk,ni,nj->nk", gamma, u, u)
    g1 = np.einsum("nk,nk->n", du, h1)
    g2 = np.einsum("nk,nk->n", du, h2)
    # tu[n, i, k] = Gamma[i, j, k] u_j, the matrix of h -> nabla_h u
    tu = np.einsum("ijk,nj->nik", gamma, u)
    b11 = np.einsum("ni,nik,nk->n", h1, tu, h1)
    b22 = np.einsum("ni,nik,nk->n", h2, tu, h2)
    b12 = np.einsum("ni,nik,nk->n", h1, tu, h2)
    b21 = np.einsum("ni,nik,nk->n", h2, tu, h1)
    return np.stack([g1, g2, b11 - b22, b12 + b21], axis=-1)


def _components_at(gamma: np.ndarray, u: np.ndarray) -> np.ndarray:
    h1, h2 = orthonormal_frame(u)
    return _components(gamma, u[None], h1[None], h2[None])[0]


def residuals(sc: StructureConstants, u: np.ndarray) -> tuple[float, float]:
    """(geodesic, conformal) residuals of the unit direction ``u``.

    Both vanish together exactly when the left-invariant line field through
    ``u`` spans a conformal foliation by geodesics; both are invariant under
    u -> -u and independent of the horizontal frame choice.
    """
    u = np.asarray(u, dtype=float)
    if abs(np.linalg.norm(u) - 1.0) > 1e-10:
        raise ValueError("direction must be a unit vector")
    gamma = connection(sc).gamma
    du = np.einsum("ijk,i,j->k", gamma, u, u)
    comps = _components_at(gamma, u)
    return float(np.linalg.norm(du)), float(np.hypot(comps[2], comps[3]))


def _transported_frames(points: np.ndarray, h1_base: np.ndarray):
    """Frames at nearby points varying smoothly from the base frame."""
    proj = points @ h1_base
    h1 = h1_base[None, :] - proj[:, None] * points
    h1 = h1 / np.linalg.norm(h1, axis=1, keepdims=True)
    h2 = np.cross(points, h1)
    return h1, h2


def _refine(gamma: np.ndarray, start: np.ndarray) -> tuple[np.ndarray, float]:
    """Damped Gauss-Newton polish of the residual vector on the sphere."""
    u = np.asarray(start, dtype=float)
    u = u / np.linalg.norm(u)
    v = _components_at(gamma, u)
    r = float(v @ v)
    for it in range(NEWTON_MAX_ITER):
        if r < 1e-30:
            break
        if it >= _STALL_ITER and r > _STALL_RESIDUAL_SQ:
            break
        h1, h2 = orthonormal_frame(u)
        offsets = np.stack(
            [
                u + _FD_STEP * h1,
                u - _FD_STEP * h1,
                u + _FD_STEP * h2,
                u - _FD_STEP * h2,
            ]
        )
        offsets = offsets / np.linalg.norm(offsets, axis=1, keepdims=True)
        th1, th2 = _transported_frames(offsets, h1)
        vals = _components(gamma, offsets, th1, th2)
        jac = np.column_stack(
            [
                (vals[0] - vals[1]) / (2.0 * _FD_STEP),
                (vals[2] - vals[3]) / (2.0 * _FD_STEP),
            ]
        )
        base = _components(gamma, u[None], h1[None], h2[None])[0]
        normal = jac.T @ jac
        normal += (1e-12 * (1.0 + abs(np.trace(normal)))) * np.eye(2)
        step = -np.linalg.solve(normal, jac.T @ base)
        moved = False
        scale = 1.0
        for _ in range(25):
            cand = u + scale * (step[0] * h1 + step[1] * h2)
            cand = cand / np.linalg.norm(cand)
            vc = _components_at(gamma, cand)
            rc = float(vc @ vc)
            if rc < r:
                u, r = cand, rc
                moved = True
                break
            scale *= 0.5
        if not moved or scale * float(np.linalg.norm(step)) < 1e-12:
            break
    return u, r


def _canonical_sign(u: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(u)))
    return -u if u[k] < 0 else u.copy()


def search_directions(
    sc: StructureConstants,
    lattice: int = LATTICE_DEFAULT,
    tol: float = JACOBI_TOL,
) -> FoliationReport:
    """Find every unit direction spanning a conformal foliation by geodesics.

    The constants must be in an orthonormal basis and satisfy Jacobi within
    ``tol``.  Constant-curvature metrics are detected first and reported
    with an empty direction list.  Otherwise all lattice points under
    ``COARSE_FILTER`` (plus the best ``TOPK_REFINE`` overall, one per
    angular basin) are refined; refined points with squared residual below
    ``ACCEPT_RESIDUAL_SQ`` are antipodally canonicalized, deduplicated at
    ``CLUSTER_ANGLE``, and returned sorted by direction components.  The
    whole pipeline is deterministic.
    """
    residual = jacobi_residual(sc)
    if residual > tol:
        raise NotLieAlgebraError(
            f"not a Lie algebra: Jacobi residual {residual:.3e} exceeds {tol:.3e}"
        )
    lattice = int(lattice)
    if lattice < 16:
        raise ValueError("lattice size must be at least 16")
    if curvature(sc).constant_curvature is not None:
        return FoliationReport(
            constant_curvature=True,
            directions=(),
            admits=True,
            lattice_min_residual=None,
            lattice_size=lattice,
        )
    gamma = connection(sc).gamma
    points, h1, h2 = _lattice(lattice)
    comps = _components(gamma, points, h1, h2)
    r = np.einsum("nv,nv->n", comps, comps)
    lattice_min = float(r.min())

    pool = np.flatnonzero(r < COARSE_FILTER)
    scale_sq = max(float(np.sum(sc.c * sc.c)), 1.0)
    if lattice_min <= _TOPK_TRIGGER * scale_sq:
        k = min(TOPK_REFINE, lattice)
        top = np.argpartition(r, k - 1)[:k]
        pool = np.union1d(pool, top)
    if pool.size > MAX_CANDIDATES:
        pool = pool[np.argsort(r[pool], kind="stable")[:MAX_CANDIDATES]]
    order = pool[np.lexsort((pool, r[pool]))]

    cos_pre = np.cos(PRE_CLUSTER_ANGLE)
    starts: list[int] = []
    for idx in order:
        if all(abs(points[idx] @ points[j]) < cos_pre for j in starts):
            starts.append(int(idx))

    found: list[tuple[np.ndarray, float]] = []
    for idx in starts:
        u_ref, r_ref = _refine(gamma, points[idx])
        if r_ref < ACCEPT_RESIDUAL_SQ:
            found.append((_canonical_sign(u_ref), r_ref))
    found.sort(key=lambda item: (item[1], item[0][0], item[0][1], item[0][2]))

    cos_cluster = np.cos(CLUSTER_ANGLE)
    kept: list[np.ndarray] = []
    for u_ref, _ in found:
        if all(abs(u_ref @ other) < cos_cluster for other in kept):
            kept.append(u_ref)

    candidates = []
    for u_ref in sorted(kept, key=tuple):
        geo, conf = residuals(sc, u_ref)
        candidates.append(
            FoliationCandidate(
                direction=u_ref, geodesic_residual=geo, conformal_residual=conf
            )
        )
    return FoliationReport(
        constant_curvature=False,
        directions=tuple(candidates),
        admits=bool(candidates),
        lattice_min_residual=lattice_min,
        lattice_size=lattice,
    )


def adapt_basis(
    sc: StructureConstants, u: np.ndarray, tol: float = 1e-7
) -> AdaptedBracketParams:
    """Read off the adapted bracket coefficients along a foliation direction.

    The frame is the deterministic completion (X, Y) = orthonormal_frame(u)
    with Z = u.  Raises ValueError("foliation conditions violated ...")
    when the residuals exceed ``tol`` or the rewritten bracket table fails
    to take the adapted shape, which would mark a search false positive.
    """
    u = np.asarray(u, dtype=float)
    geo, conf = residuals(sc, u)
    if geo > tol or conf > tol:
        raise ValueError(
            "foliation conditions violated along the given direction "
            f"(geodesic residual {geo:.3e}, conformal residual {conf:.3e})"
        )
    h1, h2 = orthonormal_frame(u)
    table = change_basis(sc, np.column_stack([h1, h2, u])).c
    deviations = (
        abs(table[2, 0, 2]),
        abs(table[2, 1, 2]),
        abs(table[2, 0, 0] - table[2, 1, 1]),
        abs(table[2, 0, 1] + table[2, 1, 0]),
    )
    if max(deviations) > tol:
        raise ValueError(
            "foliation conditions violated: bracket table does not take the "
            f"adapted form (max deviation {max(deviations):.3e})"
        )
    params = AdaptedBracketParams(
        a=float(0.5 * (table[2, 0, 0] + table[2, 1, 1])),
        b=float(0.5 * (table[2, 0, 1] - table[2, 1, 0])),
        x=float(table[0, 1, 0]),
        y=float(table[0, 1, 1]),
        z=float(table[0, 1, 2]),
    )
    worst = jacobi_constraints(params)
    if worst > max(tol, 10.0 * jacobi_residual(sc)):
        raise ValueError(
            f"foliation conditions violated: Jacobi constraints leak {worst:.3e}"
        )
    return params


def adapted_constants(params: AdaptedBracketParams) -> StructureConstants:
    """Structure constants of the adapted-form brackets."""
    return constants_from_brackets(
        xy=(params.x, params.y, params.z),
        zx=(params.a, params.b, 0.0),
        zy=(-params.b, params.a, 0.0),
    )


def jacobi_constraints(params: AdaptedBracketParams) -> float:
    """Worst violated constraint among a z = 0, a x + b y = 0, b x - a y = 0.

    Zero exactly when the adapted-form brackets satisfy Jacobi; the full
    Jacobi residual of :func:`adapted_constants` is bounded between one and
    sqrt(6) times this value.
    """
    a, b, x, y, z = params.as_tuple()
    return max(abs(a * z), abs(a * x + b * y), abs(b * x - a * y))


def classify_family(
    params: AdaptedBracketParams, tol: float = 1e-9
) -> BianchiType:
    """Bianchi type of the adapted-form algebra, by family case analysis.

    The constraint variety splits into the three families of
    :func:`enumerate_families`; the coefficients are dispatched to the
    nearest family and its case analysis is applied with ``tol`` deciding
    which coefficients count as zero.  Types IV and VI can never come out.
    """
    worst = jacobi_constraints(params)
    if worst > tol:
        raise ValueError(
            f"adapted coefficients violate the Jacobi constraints ({worst:.3e})"
        )
    a, b, x, y, z = params.as_tuple()
    distances = (
        max(abs(a), abs(b)),
        max(abs(x), abs(y), abs(z)),
        max(abs(x), abs(y), abs(a)),
    )
    family = int(np.argmin(distances))
    if family == 0:
        if abs(x) <= tol and abs(y) <= tol:
            return BianchiType("II") if abs(z) > tol else BianchiType("I")
        return BianchiType("III")
    if family == 1:
        if abs(b) <= tol:
            return BianchiType("V") if abs(a) > tol else BianchiType("I")
        return BianchiType("VII", abs(a / b))
    if abs(b) <= tol:
        return BianchiType("II") if abs(z) > tol else BianchiType("I")
    if abs(z) <= tol:
        return BianchiType("VII", 0.0)
    return BianchiType("IX") if b * z > 0 else BianchiType("VIII")


def enumerate_families() -> tuple[FoliationFamily, FoliationFamily, FoliationFamily]:
    """The three solution families of the adapted Jacobi constraints.

    Their attainable Bianchi types union to {I, II, III, V, VII, VIII, IX};
    no choice of coefficients ever produces type IV or type VI, which is
    exactly why those two groups admit no metric with a conformal foliation
    by geodesics.
    """
    return (
        FoliationFamily(
            name="a=b=0",
            zero_coefficients=("a", "b"),
            free_coefficients=("x", "y", "z"),
            attainable_types=frozenset({"I", "II", "III"}),
        ),
        FoliationFamily(
            name="x=y=z=0",
            zero_coefficients=("x", "y", "z"),
            free_coefficients=("a", "b"),
            attainable_types=frozenset({"I", "V", "VII"}),
        ),
        FoliationFamily(
            name="x=y=a=0",
            zero_coefficients=("x", "y", "a"),
            free_coefficients=("b", "z"),
            attainable_types=frozenset({"I", "II", "VII", "VIII", "IX"}),
        ),
    )


def random_metrics(count: int, seed: int = 42) -> list[MetricSpec]:
    """Reproducible well-conditioned random SPD metrics."""
    rng = np.random.default_rng(seed)
    metrics = []
    for _ in range(count):
        a = rng.standard_normal((3, 3))
        metrics.append(MetricSpec(a @ a.T + 0.5 * np.eye(3)))
    return metrics


def admits_harmonic_morphism(
    sc: StructureConstants,
    trials: int = 100,
    seed: int = 42,
    lattice: int = LATTICE_DEFAULT,
) -> tuple[bool, bool]:
    """(admits with this metric, admits with some sampled metric).

    The first component searches the given orthonormal-basis constants as
    they are; the second repeats the search after orthonormalizing against
    ``trials`` random SPD metrics from a seeded generator.
    """
    first = search_directions(sc, lattice=lattice).admits
    second = False
    for metric in random_metrics(trials, seed=seed):
        if search_directions(orthonormalize(sc, metric), lattice=lattice).admits:
            second = True
            break
    return first, second
