"""Spectral radii of A(G) and Q(G) = D(G) + A(G), Perron vectors and quotient matrices.

Radii come from a dense symmetric eigensolver per connected component; the
Perron vector is then polished by power iteration on ``M + I`` until the
residual ``||Mx - rho x||_inf`` meets the tolerance.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any, Literal

import numpy as np
from scipy import linalg

from .errors import InvariantViolation, LabArgumentError, SpectralConvergenceError
from .graph import Graph, PartitionVec, iter_bits

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-9
DEFAULT_MAX_ITERATIONS = 20000
RAYLEIGH_AGREEMENT = 1e-12

Normalization = Literal["max", "unit"]
MatrixKind = Literal["Q", "A"]


@dataclass(eq=False)
class SpectralResult:
    """Radius of A(G) or Q(G) with its nonnegative Perron vector."""

    radius: float
    perron: np.ndarray
    residual: float
    iterations: int
    matrix: MatrixKind = "Q"
    normalization: Normalization = "max"
    second: float | None = None

    @property
    def perron_min(self) -> float:
        return float(self.perron.min()) if self.perron.size else 0.0

    def to_dict(self) -> dict[str, Any]:
        return {
            "matrix": self.matrix,
            "radius": self.radius,
            "perron": [float(v) for v in self.perron],
            "residual": self.residual,
            "iterations": self.iterations,
            "normalization": self.normalization,
            "second": self.second,
        }


def adjacency_matrix(g: Graph) -> np.ndarray:
    return g.to_numpy()


def signless_laplacian(g: Graph) -> np.ndarray:
    a = g.to_numpy()
    return a + np.diag(a.sum(axis=1))


def _component_radius(
    m: np.ndarray, tol: float, max_iterations: int
) -> tuple[float, np.ndarray, float, int]:
    size = m.shape[0]
    if size == 1:
        return float(m[0, 0]), np.ones(1), 0.0, 0

    eigenvalues, eigenvectors = linalg.eigh(m)
    rho = float(eigenvalues[-1])
    x = np.abs(eigenvectors[:, -1])
    x /= x.max()
    shifted = m + np.eye(size)

    residual = float(np.abs(m @ x - rho * x).max())
    best = residual
    iterations = 0
    while residual > tol and iterations < max_iterations:
        y = shifted @ x
        x = y / y.max()
        rho = float(x @ m @ x / (x @ x))
        residual = float(np.abs(m @ x - rho * x).max())
        best = min(best, residual)
        iterations += 1
    if residual > tol:
        raise SpectralConvergenceError(
            f"Perron refinement stalled after {iterations} iterations on a {size}-vertex component",
            best,
        )
    return rho, x, residual, iterations


def _radius(
    g: Graph,
    kind: MatrixKind,
    tol: float,
    normalization: Normalization,
    max_iterations: int,
    with_second: bool,
) -> SpectralResult:
    if g.n < 1:
        raise LabArgumentError("spectral radius needs at least one vertex")
    if tol <= 0:
        raise LabArgumentError(f"tolerance must be positive, got {tol}")
    if normalization not in ("max", "unit"):
        raise LabArgumentError(f"unknown normalization {normalization!r}")

    m = signless_laplacian(g) if kind == "Q" else adjacency_matrix(g)
    best_rho = -math.inf
    best_vertices: list[int] = []
    best_vec = np.ones(1)
    worst_residual = 0.0
    total_iterations = 0
    for component in g.components():
        idx = component.to_list()
        rho, vec, residual, iterations = _component_radius(m[np.ix_(idx, idx)], tol, max_iterations)
        worst_residual = max(worst_residual, residual)
        total_iterations += iterations
        if rho > best_rho:
            best_rho, best_vertices, best_vec = rho, idx, vec

    perron = np.zeros(g.n)
    perron[best_vertices] = best_vec
    if normalization == "max":
        perron /= perron.max()
    else:
        perron /= np.linalg.norm(perron)

    second = None
    if with_second and g.n >= 2:
        second = float(linalg.eigvalsh(m)[-2])

    logger.debug(f"{kind}-radius n={g.n}: {best_rho:.12g} after {total_iterations} refinement steps")
    if kind == "Q" and best_rho < 4 * g.num_edges / g.n - tol:
        raise InvariantViolation(f"q={best_rho} below the Rayleigh bound 4e/n={4 * g.num_edges / g.n}")
    return SpectralResult(best_rho, perron, worst_residual, total_iterations, kind, normalization, second)


def q_radius(
    g: Graph,
    tol: float = DEFAULT_TOL,
    *,
    normalization: Normalization = "max",
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
    with_second: bool = False,
) -> SpectralResult:
    """Signless Laplacian spectral radius q(G); max over components when disconnected.

    Args:
        g: Graph with at least one vertex.
        tol: Residual tolerance ||Qx - qx|| of the returned pair.
        normalization: "max" scales the Perron vector to max 1, "unit" to norm 1.
        max_iterations: Iteration cap of the sparse solver before the dense fallback.
        with_second: Also report the second largest eigenvalue.

    Returns:
        Radius, nonnegative Perron vector (zero outside the dominant component)
        and residual.

    Raises:
        LabArgumentError: On an empty vertex set or unknown normalization.
        SpectralConvergenceError: If no method reaches ``tol``.
    """
    return _radius(g, "Q", tol, normalization, max_iterations, with_second)


def a_radius(
    g: Graph,
    tol: float = DEFAULT_TOL,
    *,
    normalization: Normalization = "max",
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
    with_second: bool = False,
) -> SpectralResult:
    """Adjacency spectral radius λ(G)."""
    return _radius(g, "A", tol, normalization, max_iterations, with_second)


def _as_vector(g: Graph, x: Sequence[float] | np.ndarray) -> np.ndarray:
    vec = np.asarray(x, dtype=float)
    if vec.shape != (g.n,):
        raise LabArgumentError(f"vector of shape {vec.shape} does not match {g.n} vertices")
    if not np.any(vec):
        raise LabArgumentError("Rayleigh quotient of the zero vector")
    return vec


def edge_square_sum(g: Graph, x: np.ndarray, edges: Sequence[tuple[int, int]] | None = None) -> float:
    """Sum of (x_i + x_j)^2 over ``edges`` (all edges of ``g`` by default)."""
    pairs = g.edges() if edges is None else edges
    return float(sum((x[i] + x[j]) ** 2 for i, j in pairs))


def rayleigh_q(g: Graph, x: Sequence[float] | np.ndarray) -> float:
    """x^T Q x / x^T x, cross-checked against the edge-sum form.

    Args:
        g: Graph on n vertices.
        x: Nonzero vector of length n.

    Returns:
        The Rayleigh quotient of the signless Laplacian.
    """
    vec = _as_vector(g, x)
    norm_sq = float(vec @ vec)
    quadratic = float(vec @ signless_laplacian(g) @ vec) / norm_sq
    by_edges = edge_square_sum(g, vec) / norm_sq
    if not math.isclose(quadratic, by_edges, rel_tol=RAYLEIGH_AGREEMENT, abs_tol=RAYLEIGH_AGREEMENT):
        raise InvariantViolation(f"Rayleigh forms disagree: {quadratic!r} vs {by_edges!r}")
    return quadratic


def _check_sizes(sizes: Sequence[int]) -> tuple[int, ...]:
    parts = tuple(int(s) for s in sizes)
    if len(parts) < 2:
        raise LabArgumentError(f"a multipartite quotient needs r >= 2 parts, got {len(parts)}")
    if any(s < 1 for s in parts):
        raise LabArgumentError(f"part sizes must be positive, got {parts}")
    return parts


@dataclass(eq=False)
class QuotientMatrix:
    """Quotient of Q(K_{n_1..n_r}) over its parts: diagonal n - n_i, entry (i, j) = n_j."""

    sizes: tuple[int, ...]
    matrix: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return sum(self.sizes)

    @property
    def r(self) -> int:
        return len(self.sizes)

    def radius(self) -> float:
        # D^{1/2} B D^{-1/2} with D = diag(sizes) is symmetric.
        s = np.sqrt(np.asarray(self.sizes, dtype=float))
        sym = np.outer(s, s) + np.diag([self.n - 2.0 * ni for ni in self.sizes])
        return float(linalg.eigvalsh(sym)[-1])


def quotient_multipartite(sizes: Sequence[int]) -> QuotientMatrix:
    """Quotient matrix of K_{n_1..n_r}: n - n_i on the diagonal, n_j off it.

    Args:
        sizes: At least two positive part sizes.

    Returns:
        The r x r quotient, whose largest eigenvalue is q(K_{n_1..n_r}).
    """
    parts = _check_sizes(sizes)
    n = sum(parts)
    r = len(parts)
    matrix = np.array(
        [[float(n - parts[i]) if i == j else float(parts[j]) for j in range(r)] for i in range(r)]
    )
    return QuotientMatrix(parts, matrix)


def eigencomponent_ratio(sizes: Sequence[int], i: int, j: int, q: float) -> float:
    """Perron ratio x_i / x_j = (q - n + 2 n_j) / (q - n + 2 n_i) on K_{n_1..n_r}."""
    parts = _check_sizes(sizes)
    if i == j or not (0 <= i < len(parts) and 0 <= j < len(parts)):
        raise LabArgumentError(f"need two distinct part indices in 0..{len(parts) - 1}, got {i}, {j}")
    n = sum(parts)
    denominator = q - n + 2 * parts[i]
    if denominator <= 0:
        raise LabArgumentError(f"ratio undefined: q - n + 2 n_i = {denominator} <= 0")
    return (q - n + 2 * parts[j]) / denominator


def quotient_left_perron(sizes: Sequence[int], q: float) -> np.ndarray:
    """Left Perron vector y of the quotient, y_i proportional to n_i / (q - n + 2 n_i), summing to 1."""
    parts = _check_sizes(sizes)
    n = sum(parts)
    raw = []
    for ni in parts:
        denominator = q - n + 2 * ni
        if denominator <= 0:
            raise LabArgumentError(f"left Perron vector undefined at q={q} for part size {ni}")
        raw.append(ni / denominator)
    y = np.asarray(raw)
    return y / y.sum()


def turan_sizes(n: int, r: int) -> tuple[int, ...]:
    """Balanced part sizes, largest first."""
    if not 1 <= r <= n:
        raise LabArgumentError(f"Turán graph needs 1 <= r <= n, got r={r}, n={n}")
    k, t = divmod(n, r)
    return tuple([k + 1] * t + [k] * (r - t))


def turan_edges(n: int, r: int) -> int:
    """t_r(n) = C(n, 2) - sum C(n_i, 2)."""
    return math.comb(n, 2) - sum(math.comb(s, 2) for s in turan_sizes(n, r))


def cai_fan_turan_q(n: int, r: int) -> float:
    """Closed form of q(T_r(n)) with n = kr + t.

    Args:
        n: Vertex count, at least r.
        r: Part count, at least 1.

    Returns:
        q(T_r(n)); 2(1 - 1/r)n when r divides n.
    """
    if not 1 <= r <= n:
        raise LabArgumentError(f"need 1 <= r <= n, got r={r}, n={n}")
    k, t = divmod(n, r)
    if t == 0:
        return 2.0 * (r - 1) * k
    disc = r * r * k * k + (2 * (t + 2) * r - 8 * t) * k + (t - 2) ** 2
    return ((3 * r - 4) * k + 3 * t - 2 + math.sqrt(disc)) / 2.0


def complete_split_q(a: int, n: int) -> float:
    """q(K_a ∨ K̄_{n-a}), the larger root of the quotient [[n+a-2, n-a], [a, a]].

    Args:
        a: Order of the clique side, 0 <= a < n.
        n: Total vertex count.

    Returns:
        The signless Laplacian radius; 0.0 for a = 0, where the graph is edgeless.
    """
    if not 0 <= a < n:
        raise LabArgumentError(f"need 0 <= a < n, got a={a}, n={n}")
    if a == 0:
        return 0.0
    trace = n + 2 * a - 2
    det = a * (2 * a - 2)
    return (trace + math.sqrt(trace * trace - 4 * det)) / 2.0


def balancing_gap_bound(r: int, n: int) -> float:
    """Lower bound 2(r-2)/(r^2 n) on q(T_r(n)) - q(K) for an unbalanced K."""
    return 2.0 * (r - 2) / (r * r * n)


def join_bound_terms(q_g: float, c1: float, a: int, n: int) -> tuple[float, float]:
    """Join slack terms for G = G1 ∨ G2 with |V(G1)| = a and e(G1) <= c1.

    Args:
        q_g: q(G).
        c1: Edge bound of G1.
        a: Order of G1; must exceed 2 c1 and stay below n.
        n: Order of G.

    Returns:
        ``(sharp, loose)``: sharp uses q(G) in the denominator, loose uses
        alpha n with alpha = a/n.
    """
    if not 0 < a < n:
        raise LabArgumentError(f"need 0 < a < n, got a={a}, n={n}")
    if a <= 2 * c1:
        raise LabArgumentError(f"need a > 2*c1 (n > 2c1/alpha), got a={a}, c1={c1}")
    b = n - a
    loose = 4.0 * c1 * b / (a - 2 * c1) ** 2
    denominator = q_g - b - 2 * c1
    if denominator <= 0:
        return math.inf, loose
    return 4.0 * c1 * b / denominator**2, loose


def two_class_quotient_q(n: int, r: int, c2: int) -> float:
    """q(K_{(n-(r-1)c2)/r, (n+c2)/r, ..., (n+c2)/r}) in closed form."""
    disc = (r * n - 2 * (r - 2) * c2) ** 2 - 8 * (r - 1) * (r - 2) * c2 * c2
    if disc < 0:
        raise LabArgumentError(f"closed form undefined for n={n}, r={r}, c2={c2}")
    return ((3 * r - 4) * n + 2 * c2 * (r - 2) + math.sqrt(disc)) / (2.0 * r)


def two_class_quotient_upper(n: int, r: int, c2: int) -> float:
    """2(1-1/r)n - 2(r-1)(r-2)c2^2 / (r^2 n - 2(r-2) r c2)."""
    return 2.0 * (1 - 1 / r) * n - 2.0 * (r - 1) * (r - 2) * c2 * c2 / (r * r * n - 2 * (r - 2) * r * c2)


def turan_q_lower_estimate(n: int, r: int) -> float:
    """2(1-1/r)n - (r+1)^2/(n-2); only asymptotically below q(T_r(n))."""
    if n <= 2:
        raise LabArgumentError(f"estimate needs n > 2, got {n}")
    return 2.0 * (1 - 1 / r) * n - (r + 1) ** 2 / (n - 2)


def turan_perron_min(n: int, r: int) -> float:
    """Minimum Perron component of T_r(n): (q - n + 2 floor(n/r)) / (q - n + 2 ceil(n/r))."""
    q = cai_fan_turan_q(n, r)
    lo, hi = n // r, -(-n // r)
    return (q - n + 2 * lo) / (q - n + 2 * hi)


def spectral_upper_estimate(n: int, r: int, c0: int) -> float:
    """q(T_r(n)) + 4 r c0 (n - floor(n/r)) / (floor(n/r) - 2 c0)^2."""
    floor_part = n // r
    if floor_part <= 2 * c0:
        return math.inf
    return cai_fan_turan_q(n, r) + 4.0 * r * c0 * (n - floor_part) / (floor_part - 2 * c0) ** 2


def rayleigh_split(g: Graph, parts: PartitionVec, x: Sequence[float] | np.ndarray) -> dict[str, float]:
    """Split x^T Q(G) x into the complete multipartite part plus G_in minus G_out."""
    vec = _as_vector(g, x)
    if parts.n != g.n:
        raise LabArgumentError(f"partition covers {parts.n} vertices, graph has {g.n}")
    masks = parts.masks()
    full = (1 << g.n) - 1
    k_edges = []
    in_edges = []
    out_edges = []
    for v in range(g.n):
        others = full & ~masks[parts.assignment[v]]
        upper = ~((1 << (v + 1)) - 1)
        for u in iter_bits(others & upper):
            k_edges.append((v, u))
            if not g.adj[v] >> u & 1:
                out_edges.append((v, u))
        for u in iter_bits(g.adj[v] & masks[parts.assignment[v]] & upper):
            in_edges.append((v, u))
    total = float(vec @ signless_laplacian(g) @ vec)
    multipartite = edge_square_sum(g, vec, k_edges)
    inside = edge_square_sum(g, vec, in_edges)
    missing = edge_square_sum(g, vec, out_edges)
    recombined = multipartite + inside - missing
    if not math.isclose(total, recombined, rel_tol=1e-10, abs_tol=1e-10):
        raise InvariantViolation(f"Rayleigh split does not recombine: {total!r} vs {recombined!r}")
    return {"total": total, "multipartite": multipartite, "inside": inside, "missing": missing}


def is_spectral_tie(a: float, b: float, rel_tol: float = 1e-9) -> bool:
    return abs(a - b) <= rel_tol * max(abs(a), abs(b), 1.0)
