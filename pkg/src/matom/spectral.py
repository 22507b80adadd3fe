"""Per-atom spectral analysis of a nonnegative matrix.

For every atom A (communicating block) the profile records its spectral
radius ``rho(A)`` and Perron vector, whether it is *distinguished* (every
atom strictly below it has strictly smaller radius -- exactly the atoms
carrying a nonnegative eigenvector supported on their future) and whether it
is *critical* (``rho(A) = rho(T)``).  On top of the profile sit the
nonnegative eigencone at a given eigenvalue, the decomposition of a
nonnegative eigenvector in that cone, exact multiplicity bookkeeping, and
the classification of monatomic operators.

Numerics
--------
Spectral radii come from power iteration on ``block + I``: the shift makes
an irreducible block primitive, so the iteration converges geometrically
even on periodic blocks, and ``rho`` is recovered by subtracting one.

Radius comparisons are never resolved silently inside a tie band of width
``atol = atol_factor * rho(T)``: atoms whose classification depends on such
a tie are flagged ``borderline`` and every structural verdict carries an
ambiguity bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .errors import InputError, InvariantViolation, PowerIterationError
from .matrix import NonnegativeMatrix
from . import oracle, sets
from .atoms import AtomPartition, AtomPoset, atom_order, atoms, is_antichain


@dataclass(frozen=True)
class Tolerances:
    """Numeric policy knobs; all comparisons in the package go through these.

    ``rtol``
        relative tolerance for eigen-residuals and radius convergence;
    ``atol_factor``
        radius-equality ties use ``atol_factor * rho(T)``;
    ``pos_tol_factor``
        support detection in computed vectors uses
        ``pos_tol_factor * max|entry|``;
    ``support_threshold``
        relative cut below which a float matrix entry counts as zero when
        building the support graph.
    """

    rtol: float = 1e-10
    atol_factor: float = 1e-9
    pos_tol_factor: float = 1e-12
    support_threshold: float = 1e-12
    max_iterations: int = 100_000

    def tie_tolerance(self, radius: float) -> float:
        return self.atol_factor * radius

    def pos_tolerance(self, scale: float) -> float:
        return self.pos_tol_factor * scale


DEFAULT_TOLERANCES = Tolerances()


# ---------------------------------------------------------------------------
# Power iteration
# ---------------------------------------------------------------------------


def _power_block(block: np.ndarray, tol: Tolerances) -> tuple[float, np.ndarray]:
    """Dominant eigenpair of a nonnegative block via power iteration on block+I.

    Convergence requires both a stable Rayleigh estimate and a small
    eigen-residual; the extra 1/8 safety factor keeps the residual of the
    unshifted block below ``rtol * rho`` for radii of order one.
    """
    k = block.shape[0]
    if k == 1:
        return float(block[0, 0]), np.ones(1)
    shifted = block + np.eye(k)
    x = np.full(k, 1.0 / np.sqrt(k))
    lam_prev = np.inf
    lam = 1.0
    gap = np.inf
    target = tol.rtol / 8.0
    for _ in range(tol.max_iterations):
        y = shifted @ x
        lam = float(x @ y)
        gap = abs(lam - lam_prev)
        residual = float(np.linalg.norm(y - lam * x))
        if gap <= target * lam and residual <= target * lam:
            norm = float(np.linalg.norm(y))
            return lam - 1.0, y / norm
        lam_prev = lam
        x = y / np.linalg.norm(y)
    raise PowerIterationError(
        "power iteration did not converge", last_estimate=lam - 1.0, gap=gap,
        iterations=tol.max_iterations,
    )


def spectral_radius(matrix: NonnegativeMatrix, members: Iterable[int] | None = None,
                    tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Spectral radius of the matrix, or of its restriction to ``members``.

    The restriction is decomposed into its communicating blocks and the
    radius is the maximum over the blocks (what is left outside them is
    nilpotent at support level and contributes nothing).  Each block is
    irreducible, so the shifted power iteration converges geometrically;
    running it on the whole of a reducible restriction would stall whenever
    the dominant eigenvalue is defective.

    Returns 0 for an empty or all-zero restriction.  Raises
    :class:`PowerIterationError` (with the last estimate and gap) if some
    block exhausts the iteration budget.
    """
    g = sets.as_support(matrix, tol.support_threshold)
    if members is None:
        members = range(matrix.n)
    subset = sets.validate_subset(g, members)
    if not subset:
        return 0.0
    induced = sets.restrict(g, subset) if len(subset) < matrix.n else g
    best = 0.0
    for component in sets.strongly_connected_components(induced):
        comp = component & subset
        if not comp or not _atom_has_cycle(induced, comp):
            continue
        idx = sorted(comp)
        block = np.array(matrix.entries[np.ix_(idx, idx)], dtype=float)
        radius, _ = _power_block(block, tol)
        best = max(best, radius)
    return best


def perron_vector(matrix: NonnegativeMatrix, atom_members: Iterable[int],
                  tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Perron vector of the block of one non-zero atom, embedded in R^n.

    Normalized to unit l1 norm, strictly positive exactly on the atom.
    """
    g = sets.as_support(matrix, tol.support_threshold)
    members = sorted(sets.validate_subset(g, atom_members))
    if not sets.is_irreducible(g, members):
        raise InputError(f"{members} is not an atom (not strongly connected)")
    if not any(i in members for j in members for i in g.succ[j]):
        raise InputError("no Perron vector for a zero atom (no internal edge)")
    block = np.array(matrix.entries[np.ix_(members, members)], dtype=float)
    radius, vec = _power_block(block, tol)
    vec = np.abs(vec)
    vec /= vec.sum()
    if float(vec.min()) <= 0.0:
        raise PowerIterationError(
            "Perron vector has a nonpositive entry on its atom",
            last_estimate=radius, gap=float(vec.min()), iterations=0,
        )
    out = np.zeros(matrix.n)
    out[members] = vec
    return out


# ---------------------------------------------------------------------------
# The spectral profile
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AtomSpectrum:
    """Spectral data attached to one atom."""

    index: int
    members: frozenset
    nonzero: bool  # the block carries a cycle, i.e. rho(A) > 0 structurally
    radius: float
    perron: np.ndarray | None
    distinguished: bool
    critical: bool
    borderline: bool


@dataclass(frozen=True)
class SpectralProfile:
    """Atoms, their order, radii, Perron vectors and classification flags."""

    matrix: NonnegativeMatrix
    graph: sets.SupportGraph
    partition: AtomPartition
    poset: AtomPoset
    atom_data: tuple[AtomSpectrum, ...]
    radius: float
    tie_tol: float
    tolerances: Tolerances

    def atom(self, index: int) -> AtomSpectrum:
        return self.atom_data[index]

    @property
    def nonzero_ids(self) -> tuple[int, ...]:
        return tuple(a.index for a in self.atom_data if a.nonzero)

    @property
    def critical_ids(self) -> tuple[int, ...]:
        return tuple(a.index for a in self.atom_data if a.critical)

    @property
    def distinguished_ids(self) -> tuple[int, ...]:
        return tuple(a.index for a in self.atom_data if a.distinguished)

    @property
    def ambiguous(self) -> bool:
        return any(a.borderline for a in self.atom_data)


def _atom_has_cycle(g: sets.SupportGraph, members: frozenset) -> bool:
    return any(i in members for j in members for i in g.succ[j])


def spectral_profile(matrix: NonnegativeMatrix,
                     tol: Tolerances = DEFAULT_TOLERANCES) -> SpectralProfile:
    """Compute the full per-atom spectral profile of a matrix.

    ``rho(T)`` is taken as the maximum over atom radii: the blocks are
    irreducible, where the shifted power iteration is guaranteed to
    converge, and the identity ``rho(T) = max_A rho(A)`` holds in theory.

    Distinguishedness is decided twice -- once through the atom order and
    once through the spectral radius of the strict future at set level --
    and the two routes must agree; a tie within ``atol`` marks the atom
    borderline instead of being silently resolved.
    """
    g = sets.support_graph(matrix, tol.support_threshold)
    part = atoms(g)
    poset = atom_order(g, part)

    nonzero = [_atom_has_cycle(g, a) for a in part.atoms]
    radii: list[float] = []
    perrons: list[np.ndarray | None] = []
    for k, members in enumerate(part.atoms):
        if not nonzero[k]:
            radii.append(0.0)
            perrons.append(None)
            continue
        idx = sorted(members)
        block = np.array(matrix.entries[np.ix_(idx, idx)], dtype=float)
        radius, vec = _power_block(block, tol)
        vec = np.abs(vec)
        full = np.zeros(matrix.n)
        full[idx] = vec / vec.sum()
        radii.append(max(radius, 0.0))
        perrons.append(full)

    rho = max(radii, default=0.0)
    atol = tol.tie_tolerance(rho)

    data = []
    for k in range(len(part)):
        strictly_below = poset.strictly_below(k)
        # route 1: the atom order
        by_order = nonzero[k] and all(radii[b] < radii[k] - atol for b in strictly_below)
        # route 2: atoms contained in the strict future, recomputed at set level
        sfut = sets.strict_future(g, part.atoms[k])
        below_by_sets = frozenset(
            b for b in range(len(part)) if b != k and part.atoms[b] <= sfut
        )
        if below_by_sets != strictly_below:
            raise InvariantViolation(
                "distinguished-route-agreement",
                f"strict future of atom {sorted(part.atoms[k])} disagrees with the atom order",
            )
        future_radius = max((radii[b] for b in below_by_sets), default=0.0)
        by_future = nonzero[k] and (radii[k] - future_radius > atol)
        if by_order != by_future:
            raise InvariantViolation(
                "distinguished-route-agreement",
                f"order-based and future-based distinguishedness disagree on atom "
                f"{sorted(part.atoms[k])}",
            )
        tie_below = any(abs(radii[k] - radii[b]) <= atol for b in strictly_below if nonzero[b])
        near_critical_miss = nonzero[k] and atol < rho - radii[k] <= 2 * atol
        data.append(
            AtomSpectrum(
                index=k,
                members=part.atoms[k],
                nonzero=nonzero[k],
                radius=radii[k],
                perron=perrons[k],
                distinguished=by_order,
                critical=nonzero[k] and rho - radii[k] <= atol,
                borderline=bool((nonzero[k] and tie_below) or near_critical_miss),
            )
        )
    return SpectralProfile(
        matrix=matrix, graph=g, partition=part, poset=poset,
        atom_data=tuple(data), radius=rho, tie_tol=atol, tolerances=tol,
    )


# ---------------------------------------------------------------------------
# Distinguished atoms and the nonnegative eigencone
# ---------------------------------------------------------------------------


def distinguished_atoms(profile: SpectralProfile) -> dict[float, tuple[int, ...]]:
    """Distinguished atoms grouped by eigenvalue (radii equal within atol).

    Keys are eigenvalues in decreasing order; each value is an antichain of
    atom indices.
    """
    ids = sorted(profile.distinguished_ids, key=lambda k: (-profile.atom(k).radius, k))
    groups: dict[float, tuple[int, ...]] = {}
    current: list[int] = []
    for k in ids:
        if current and abs(profile.atom(current[0]).radius - profile.atom(k).radius) > profile.tie_tol:
            groups[profile.atom(current[0]).radius] = tuple(current)
            current = []
        current.append(k)
    if current:
        groups[profile.atom(current[0]).radius] = tuple(current)
    for value, group in groups.items():
        if not is_antichain(profile.poset, group):
            raise InvariantViolation(
                "distinguished-antichain",
                f"distinguished atoms at eigenvalue {value} are not an antichain",
            )
    return groups


def distinguished_eigenvector(profile: SpectralProfile, atom_id: int,
                              exact_radius: Fraction | None = None) -> np.ndarray:
    """The nonnegative eigenvector attached to a distinguished atom.

    Supported exactly on the future of the atom, equal to the Perron vector
    on the atom itself; the tail on the strict future ``B`` solves
    ``(rho(A) I - T_B) f = 1_B T v_A`` (a positive Neumann-series inverse,
    so ``f >= 0``).  With ``exact_radius`` given and an exact-backend
    matrix, the solve runs in exact rational arithmetic.
    """
    atom = profile.atom(atom_id)
    if not atom.distinguished:
        raise InputError(
            f"atom {sorted(atom.members)} is not distinguished; no eigenvector with "
            "support equal to its future exists"
        )
    v = atom.perron
    assert v is not None
    fut = sets.future(profile.graph, atom.members)
    tail = sorted(fut - atom.members)
    if not tail:
        return v.copy()

    matrix = profile.matrix
    if exact_radius is not None and matrix.is_exact:
        rows = matrix.rational_rows()
        v_exact = _exact_perron_from_float(matrix, atom, exact_radius)
        rhs = [
            sum((rows[i][j] * v_exact[j] for j in sorted(atom.members)), Fraction(0))
            for i in tail
        ]
        system = [
            [(exact_radius if i == j else Fraction(0)) - rows[ti][tj]
             for j, tj in enumerate(tail)]
            for i, ti in enumerate(tail)
        ]
        try:
            sol = oracle.exact_solve(system, [rhs])[0]
        except InputError as exc:
            raise InvariantViolation(
                "eigenvector-extension-singular",
                f"exact extension system singular for atom {sorted(atom.members)}",
            ) from exc
        w = np.array([float(x) for x in v_exact])
        for pos, i in enumerate(tail):
            w[i] = float(sol[pos])
    else:
        dense = matrix.to_float()
        rho = atom.radius
        system = rho * np.eye(len(tail)) - dense[np.ix_(tail, tail)]
        rhs = (dense @ v)[tail]
        try:
            f = np.linalg.solve(system, rhs)
        except np.linalg.LinAlgError as exc:
            raise InvariantViolation(
                "eigenvector-extension-singular",
                f"(rho I - T_B) is singular for atom {sorted(atom.members)}: the radius "
                "of the strict future ties rho(A); tolerance breach upstream",
            ) from exc
        w = v.copy()
        w[tail] = f
    _check_eigenvector(profile, w, atom.radius, support=fut)
    return w


def _exact_perron_from_float(matrix: NonnegativeMatrix, atom: AtomSpectrum,
                             exact_radius: Fraction) -> list[Fraction]:
    """Exact Perron vector of an atom block, from the kernel of (T_A - rho I).

    Only valid when ``exact_radius`` really is the block's Perron root; the
    kernel is one-dimensional then (the root is simple on an irreducible
    block), and we normalize to unit l1 mass.
    """
    idx = sorted(atom.members)
    rows = matrix.rational_rows()
    block = [[rows[i][j] for j in idx] for i in idx]
    shifted = oracle.shifted_exact(block, exact_radius)
    kernel = _exact_kernel_vector(shifted)
    if kernel is None:
        raise InputError(f"{exact_radius} is not the exact radius of atom {idx}")
    total = sum(kernel, Fraction(0))
    if total == 0:
        raise InputError("degenerate exact kernel vector")
    normalized = [x / total for x in kernel]
    out = [Fraction(0)] * matrix.n
    for pos, i in enumerate(idx):
        out[i] = normalized[pos]
    return out


def _exact_kernel_vector(rows: list[list[Fraction]]) -> list[Fraction] | None:
    n = len(rows)
    m = [row[:] for row in rows]
    pivots: list[int] = []
    r = 0
    for c in range(n):
        pivot = next((i for i in range(r, n) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(n):
            if i != r and m[i][c] != 0:
                factor = m[i][c]
                m[i] = [x - factor * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    if not free:
        return None
    c0 = free[0]
    vec = [Fraction(0)] * n
    vec[c0] = Fraction(1)
    for row_idx, c in enumerate(pivots):
        vec[c] = -m[row_idx][c0]
    return vec


def _check_eigenvector(profile: SpectralProfile, w: np.ndarray, value: float,
                       support: frozenset) -> None:
    tol = profile.tolerances
    dense = profile.matrix.to_float()
    scale = float(np.abs(w).max())
    residual = float(np.abs(dense @ w - value * w).max())
    if residual > tol.rtol * max(value, 1.0) * scale:
        raise InvariantViolation(
            "eigenvector-residual",
            f"residual {residual:.3e} exceeds tolerance at eigenvalue {value}",
        )
    pos_tol = tol.pos_tolerance(scale)
    on = {int(i) for i in np.nonzero(w > pos_tol)[0]}
    if on != set(support):
        raise InvariantViolation(
            "eigenvector-support",
            f"support {sorted(on)} differs from the future {sorted(support)}",
        )


def eigencone_basis(profile: SpectralProfile, value: float) -> list[tuple[int, np.ndarray]]:
    """Basis of the cone of nonnegative eigenvectors at the given eigenvalue.

    Empty exactly when ``value`` is not a distinguished eigenvalue.  The
    returned family (one vector per distinguished atom of that radius,
    ordered by atom index) is linearly independent: the supports are futures
    of an antichain, so each vector is alone on its own atom.
    """
    if value <= 0:
        raise InputError("eigencone is defined for positive eigenvalues")
    for radius, group in distinguished_atoms(profile).items():
        if abs(radius - value) <= max(profile.tie_tol, profile.tolerances.rtol * value):
            return [(k, distinguished_eigenvector(profile, k)) for k in sorted(group)]
    return []


def decompose_nonnegative_eigenvector(profile: SpectralProfile, vector,
                                      value: float) -> dict[int, float]:
    """Write a nonnegative eigenvector as a conical combination of the basis.

    Coefficients are read off atom by atom (the basis vector of any other
    distinguished atom vanishes on this atom, since distinguished atoms of
    one eigenvalue form an antichain), then the full reconstruction is
    verified.  ``c_A > 0`` exactly when the atom lies in the support.
    """
    tol = profile.tolerances
    v = np.asarray(vector, dtype=float)
    if v.shape != (profile.matrix.n,):
        raise InputError(f"vector must have shape ({profile.matrix.n},)")
    scale = float(np.abs(v).max())
    if scale == 0.0:
        raise InputError("zero vector")
    if float(v.min()) < -tol.pos_tolerance(scale):
        raise InputError("vector is not nonnegative")
    dense = profile.matrix.to_float()
    residual = float(np.abs(dense @ v - value * v).max())
    if residual > tol.rtol * max(value, 1.0) * scale:
        raise InputError(
            f"input is not an eigenvector at {value}: residual {residual:.3e}"
        )
    basis = eigencone_basis(profile, value)
    if not basis:
        raise InputError(f"{value} is not a distinguished eigenvalue")
    pos_tol = tol.pos_tolerance(scale)
    coeffs: dict[int, float] = {}
    recon = np.zeros_like(v)
    for atom_id, w in basis:
        members = sorted(profile.atom(atom_id).members)
        c = float(v[members].sum())  # Perron parts have unit l1 mass on the atom
        if c < -pos_tol:
            raise InvariantViolation(
                "eigencone-nonnegative-coefficients",
                f"negative coefficient {c:.3e} on atom {members}",
            )
        c = max(c, 0.0)
        in_support = all(v[i] > pos_tol for i in members)
        if in_support != (c > pos_tol):
            raise InvariantViolation(
                "eigencone-support-coefficients",
                f"coefficient {c:.3e} inconsistent with support on atom {members}",
            )
        coeffs[atom_id] = c
        recon += c * w
    err = float(np.abs(recon - v).max())
    if err > 100 * tol.rtol * max(value, 1.0) * scale:
        raise InvariantViolation(
            "eigencone-reconstruction",
            f"conical reconstruction misses the input by {err:.3e}",
        )
    return coeffs


# ---------------------------------------------------------------------------
# Multiplicities
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MultiplicityDecomposition:
    value: Fraction
    total: int
    per_atom: dict[int, int] = field(repr=False)


def multiplicity_decomposition(matrix: NonnegativeMatrix, value,
                               tol: Tolerances = DEFAULT_TOLERANCES) -> MultiplicityDecomposition:
    """Algebraic multiplicity of a rational eigenvalue and its per-atom split.

    Exact-backend only: both the global multiplicity and the per-atom ones
    are exact ranks, and the identity ``mult(lam, T) = sum_A mult(lam, A)``
    over non-zero atoms is asserted.
    """
    lam = Fraction(value)
    if lam == 0:
        raise InputError("multiplicity decomposition requires a nonzero eigenvalue")
    rows = matrix.rational_rows()
    g = sets.support_graph(matrix, tol.support_threshold)
    part = atoms(g)
    total = oracle.exact_multiplicity(rows, lam)
    per_atom: dict[int, int] = {}
    for k, members in enumerate(part.atoms):
        if not _atom_has_cycle(g, members):
            continue
        idx = sorted(members)
        block = [[rows[i][j] for j in idx] for i in idx]
        per_atom[k] = oracle.exact_multiplicity(block, lam)
    if total != sum(per_atom.values()):
        raise InvariantViolation(
            "multiplicity-decomposition",
            f"mult({lam}, T) = {total} but the per-atom multiplicities sum to "
            f"{sum(per_atom.values())}",
        )
    return MultiplicityDecomposition(value=lam, total=total, per_atom=per_atom)


def radius_multiplicity(profile: SpectralProfile,
                        exact_radius: Fraction | None = None) -> int:
    """Multiplicity of ``rho(T)`` as the number of critical atoms.

    With ``exact_radius`` on an exact-backend matrix the count is
    cross-checked against the exact multiplicity decomposition.
    """
    if profile.radius <= 0.0:
        raise InputError("radius multiplicity requires rho(T) > 0")
    count = len(profile.critical_ids)
    if exact_radius is not None and profile.matrix.is_exact:
        exact = multiplicity_decomposition(profile.matrix, exact_radius,
                                           profile.tolerances).total
        if exact != count:
            raise InvariantViolation(
                "radius-multiplicity-agreement",
                f"critical atom count {count} differs from exact multiplicity {exact}",
            )
    return count


# ---------------------------------------------------------------------------
# Monatomicity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MonatomicityVerdict:
    """Outcome of the three equivalent monatomicity tests.

    ``conditions`` records the truth value of each formulation:
    ``single_nonzero_atom``, ``unique_pair_and_simple_radius`` and
    ``unique_pair_and_overlapping_supports``; ``evidence`` carries the
    sub-facts they were derived from.
    """

    is_monatomic: bool
    nonzero_atom: frozenset | None
    right_vector: np.ndarray | None
    left_vector: np.ndarray | None
    conditions: dict[str, bool]
    evidence: dict[str, object]
    borderline: bool


def classify_monatomic(matrix: NonnegativeMatrix,
                       tol: Tolerances = DEFAULT_TOLERANCES) -> MonatomicityVerdict:
    """Decide whether the operator has exactly one non-zero atom.

    Evaluates the three equivalent formulations (atom count; uniqueness of
    the nonnegative right and left eigenvectors plus simplicity of
    ``rho(T)``; uniqueness plus overlapping supports) and insists they
    agree.  When they do and the operator is monatomic, the intersection of
    the two supports is returned and checked to be the non-zero atom.
    """
    profile = spectral_profile(matrix, tol)
    if profile.radius <= 0.0:
        raise InputError("monatomicity is defined for operators with rho(T) > 0")
    left_profile = spectral_profile(matrix.transpose(), tol)

    right_unique = len(profile.distinguished_ids) == 1
    left_unique = len(left_profile.distinguished_ids) == 1
    simple = radius_multiplicity(profile) == 1

    right_vector = left_vector = None
    supports_intersect = False
    intersection: frozenset = frozenset()
    if right_unique and left_unique:
        r_id = profile.distinguished_ids[0]
        l_id = left_profile.distinguished_ids[0]
        right_vector = distinguished_eigenvector(profile, r_id)
        left_vector = distinguished_eigenvector(left_profile, l_id)
        intersection = sets.future(profile.graph, profile.atom(r_id).members) & sets.past(
            profile.graph, left_profile.atom(l_id).members
        )
        supports_intersect = bool(intersection)

    conditions = {
        "single_nonzero_atom": len(profile.nonzero_ids) == 1,
        "unique_pair_and_simple_radius": right_unique and left_unique and simple,
        "unique_pair_and_overlapping_supports": right_unique and left_unique
        and supports_intersect,
    }
    verdicts = set(conditions.values())
    if len(verdicts) != 1:
        raise InvariantViolation(
            "monatomicity-equivalence",
            f"the three monatomicity formulations disagree: {conditions}",
        )
    is_monatomic = verdicts.pop()

    nonzero_atom = None
    if is_monatomic:
        nonzero_atom = profile.atom(profile.nonzero_ids[0]).members
        if intersection != nonzero_atom:
            raise InvariantViolation(
                "monatomic-support-intersection",
                f"supp(u) & supp(v) = {sorted(intersection)} is not the non-zero atom "
                f"{sorted(nonzero_atom)}",
            )
    return MonatomicityVerdict(
        is_monatomic=is_monatomic,
        nonzero_atom=nonzero_atom,
        right_vector=right_vector,
        left_vector=left_vector,
        conditions=conditions,
        evidence={
            "right_unique": right_unique,
            "left_unique": left_unique,
            "radius_multiplicity_one": simple,
            "supports_intersect": supports_intersect,
            "nonzero_atom_count": len(profile.nonzero_ids),
        },
        borderline=profile.ambiguous or left_profile.ambiguous,
    )


# ---------------------------------------------------------------------------
# Resolvent
# ---------------------------------------------------------------------------


def resolvent(matrix: NonnegativeMatrix, value,
              tol: Tolerances = DEFAULT_TOLERANCES) -> NonnegativeMatrix:
    """``(value*I - T)^{-1}``, entrywise nonnegative for ``value > rho(T)``.

    Exact-backend matrices with a rational ``value`` are inverted exactly;
    otherwise a dense float solve is used.  The support pattern of the
    result has the same invariant sets as the input (Neumann series).
    """
    profile_radius = spectral_radius(matrix, tol=tol)
    margin = tol.tie_tolerance(profile_radius)
    if not float(value) > profile_radius + margin:
        raise InputError(
            f"resolvent requires value > rho(T) + margin ({profile_radius} + {margin})"
        )
    if matrix.is_exact and isinstance(value, (int, Fraction)):
        shifted = [
            [-x if i != j else Fraction(value) - x for j, x in enumerate(row)]
            for i, row in enumerate(matrix.rational_rows())
        ]
        inv = oracle.exact_inverse(shifted)
        for row in inv:
            for x in row:
                if x < 0:
                    raise InvariantViolation(
                        "resolvent-positivity", f"negative resolvent entry {x}"
                    )
        return NonnegativeMatrix(inv, backend="exact")
    dense = matrix.to_float()
    n = matrix.n
    out = np.linalg.solve(float(value) * np.eye(n) - dense, np.eye(n))
    floor = -tol.pos_tolerance(float(np.abs(out).max()))
    if float(out.min()) < floor:
        raise InvariantViolation(
            "resolvent-positivity", f"negative resolvent entry {float(out.min()):.3e}"
        )
    return NonnegativeMatrix(np.maximum(out, 0.0))
