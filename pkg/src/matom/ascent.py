"""Critical atoms, heights, ascent, and a structured basis of the
generalized eigenspace at the spectral radius.

The generalized eigenspace ``K(T) = U_k ker(T - rho(T) I)^k`` has dimension
equal to the number of critical atoms, and admits a basis ``(w_A)`` with one
vector per critical atom A such that

* ``w_A`` is supported inside the future of A and restricts to the Perron
  vector on A;
* the matrix M of T on that basis is triangular along the atom order, with
  ``rho(T)`` on the diagonal and strictly positive entries on covers;
* the nilpotency index of ``w_A`` equals the height of A among critical
  atoms.

The ascent of T at ``rho(T)`` is the maximal critical height; the exact
rational rank stabilization of ``(T - rho I)^k`` serves as its independent
oracle on exact-backend inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InputError, InvariantViolation
from .matrix import NonnegativeMatrix
from . import oracle, sets
from .atoms import subset_heights
from .spectral import (
    DEFAULT_TOLERANCES,
    SpectralProfile,
    Tolerances,
    distinguished_eigenvector,
)


def critical_atoms(profile: SpectralProfile) -> tuple[int, ...]:
    """Atoms whose radius ties ``rho(T)`` within the tie tolerance."""
    if profile.radius <= 0.0:
        raise InputError("critical atoms are defined for rho(T) > 0")
    return profile.critical_ids


@dataclass(frozen=True)
class CriticalStructure:
    """Critical atoms with their restricted order, heights, basis and matrix."""

    profile: SpectralProfile
    atom_ids: tuple[int, ...]
    covers: tuple[tuple[int, int], ...]  # (upper, lower), within critical atoms only
    heights: dict[int, int]
    ascent: int
    basis: tuple[np.ndarray, ...]
    basis_matrix: np.ndarray
    borderline: bool

    @property
    def radius(self) -> float:
        return self.profile.radius


def critical_structure(profile: SpectralProfile) -> CriticalStructure:
    """Assemble heights, ascent, basis and basis matrix for the critical atoms."""
    ids = critical_atoms(profile)
    heights = subset_heights(profile.poset, ids)
    covers = _critical_covers(profile, ids)
    basis = generalized_basis(profile, ids, heights)
    matrix = basis_matrix(profile, ids, basis, covers)
    alpha = max(heights.values())
    if len(ids) < alpha:
        raise InvariantViolation(
            "ascent-dimension-bound",
            f"ascent {alpha} exceeds the number of critical atoms {len(ids)}",
        )
    return CriticalStructure(
        profile=profile,
        atom_ids=ids,
        covers=covers,
        heights=heights,
        ascent=alpha,
        basis=basis,
        basis_matrix=matrix,
        borderline=any(profile.atom(a).borderline for a in ids),
    )


def ascent(structure: CriticalStructure) -> int:
    """Maximal height among critical atoms (= ascent of T at rho(T))."""
    return structure.ascent


def _critical_covers(profile: SpectralProfile,
                     ids: tuple[int, ...]) -> tuple[tuple[int, int], ...]:
    # covers are taken within the critical atoms: chains live there
    idset = set(ids)
    covers = []
    for a in ids:
        lower = [b for b in profile.poset.strictly_below(a) if b in idset]
        for b in lower:
            if any(b in profile.poset.strictly_below(c) for c in lower if c != b):
                continue
            covers.append((a, b))
    return tuple(sorted(covers))


def generalized_basis(profile: SpectralProfile, ids: tuple[int, ...],
                      heights: dict[int, int]) -> tuple[np.ndarray, ...]:
    """One generalized eigenvector per critical atom.

    Height-1 atoms are exactly the distinguished critical atoms and reuse
    the eigenvector of their future.  For a higher atom A the vector is the
    minimal-Euclidean-norm element of the nullspace of
    ``(T_F(A) - rho I)^c`` (c = number of critical atoms in the future of
    A, a valid exponent bound since the ascent of the restriction is at
    most its critical-atom count) that restricts to the Perron vector on A.
    Minimal norm is a deterministic canonicalization; the triangularity and
    index statements hold for any valid choice.
    """
    rho = profile.radius
    dense = profile.matrix.to_float()
    vectors: list[np.ndarray] = []
    for a in ids:
        atom = profile.atom(a)
        if heights[a] == 1:
            if not atom.distinguished:
                raise InvariantViolation(
                    "critical-height-one-distinguished",
                    f"critical atom {sorted(atom.members)} has height 1 but is not "
                    "distinguished: a radius tie was misclassified",
                )
            vectors.append(distinguished_eigenvector(profile, a))
            continue
        fut = sorted(sets.future(profile.graph, atom.members))
        c = sum(1 for b in ids if profile.atom(b).members <= set(fut))
        block = dense[np.ix_(fut, fut)] - rho * np.eye(len(fut))
        power = np.linalg.matrix_power(block, c)
        scale = max(float(np.linalg.norm(block, 2)), 1e-300) ** c
        nullspace = _nullspace(power, scale)
        if nullspace.shape[1] == 0:
            raise InvariantViolation(
                "generalized-basis-infeasible",
                f"empty nullspace over the future of atom {sorted(atom.members)}",
            )
        rows = [fut.index(i) for i in sorted(atom.members)]
        target = atom.perron[sorted(atom.members)]
        coeff, *_ = np.linalg.lstsq(nullspace[rows, :], target, rcond=None)
        x = nullspace @ coeff
        err = float(np.abs(x[rows] - target).max())
        if err > 1e-8 * float(np.abs(target).max()):
            raise InvariantViolation(
                "generalized-basis-infeasible",
                f"cannot pin the Perron part on atom {sorted(atom.members)} "
                f"(residual {err:.3e}); a radius tie was misclassified",
            )
        w = np.zeros(profile.matrix.n)
        w[fut] = x
        vectors.append(w)
    stacked = np.column_stack(vectors) if vectors else np.zeros((profile.matrix.n, 0))
    if np.linalg.matrix_rank(stacked) != len(vectors):
        raise InvariantViolation(
            "generalized-basis-independence", "basis vectors are linearly dependent"
        )
    return tuple(vectors)


def _nullspace(matrix: np.ndarray, scale: float) -> np.ndarray:
    """Nullspace basis with a cut anchored to the power's intrinsic scale.

    ``scale`` is ``||block||^c``: when the whole power is numerical noise
    (a block nilpotent at rho up to rounding in rho itself), every singular
    value sits far below it, so a cut relative to the largest singular
    value alone would keep the noise as signal.  Radius gaps well above
    ``1e-9 * ||block||`` keep genuine non-null directions safely above the
    cut.
    """
    _, singulars, vh = np.linalg.svd(matrix)
    top = float(singulars[0]) if singulars.size else 0.0
    cut = 1e-9 * max(top, scale)
    rank = int((singulars > cut).sum())
    return vh[rank:].conj().T


def basis_matrix(profile: SpectralProfile, ids: tuple[int, ...],
                 basis: tuple[np.ndarray, ...],
                 covers: tuple[tuple[int, int], ...]) -> np.ndarray:
    """Matrix M of T on the basis: ``T w_A = sum_B M[A, B] w_B``.

    Asserts the triangular structure: diagonal entries equal ``rho(T)``,
    entries vanish unless B lies weakly below A, and entries on critical
    covers are strictly positive.
    """
    rho = profile.radius
    tol = max(profile.tie_tol, profile.tolerances.rtol * max(rho, 1.0))
    dense = profile.matrix.to_float()
    stacked = np.column_stack(basis)
    m = len(ids)
    out = np.zeros((m, m))
    for row, a in enumerate(ids):
        mapped = dense @ basis[row]
        coeff, *_ = np.linalg.lstsq(stacked, mapped, rcond=None)
        out[row, :] = coeff
        leftover = float(np.abs(stacked @ coeff - mapped).max())
        if leftover > tol * max(float(np.abs(mapped).max()), 1.0):
            raise InvariantViolation(
                "basis-matrix-structure",
                f"T w does not lie in the basis span for atom {a} "
                f"(residual {leftover:.3e})",
            )
    pos = {a: k for k, a in enumerate(ids)}
    cover_set = set(covers)
    for a in ids:
        for b in ids:
            entry = out[pos[a], pos[b]]
            if a == b:
                if abs(entry - rho) > tol:
                    raise InvariantViolation(
                        "basis-matrix-structure",
                        f"diagonal entry {entry!r} differs from rho(T) = {rho!r}",
                    )
            elif b not in profile.poset.strictly_below(a):
                if abs(entry) > tol:
                    raise InvariantViolation(
                        "basis-matrix-structure",
                        f"entry {entry!r} at non-comparable pair (atoms {a}, {b}) "
                        "should vanish",
                    )
            elif (a, b) in cover_set and entry <= tol:
                raise InvariantViolation(
                    "basis-matrix-structure",
                    f"cover entry {entry!r} at (atoms {a}, {b}) should be positive",
                )
    return out


def vector_index(matrix: NonnegativeMatrix, vector: np.ndarray, radius: float,
                 tol: Tolerances = DEFAULT_TOLERANCES, max_steps: int | None = None) -> int:
    """Nilpotency index of a generalized eigenvector at ``radius``.

    Least k with ``(T - radius I)^k w = 0`` up to a tolerance that scales
    with ``||T||^k``, since powers of a defective shift amplify rounding.
    """
    dense = matrix.to_float()
    shift = dense - radius * np.eye(matrix.n)
    norm_t = max(float(np.linalg.norm(dense, 2)), 1.0)
    scale = float(np.abs(vector).max())
    cap = max_steps if max_steps is not None else matrix.n + 1
    current = vector.astype(float)
    for k in range(cap + 1):
        if float(np.abs(current).max()) <= 1e-8 * scale * norm_t**k:
            return k
        current = shift @ current
    raise InvariantViolation(
        "vector-index-unbounded",
        f"(T - rho I)^k did not annihilate the vector within {cap} steps",
    )


def exact_ascent(matrix: NonnegativeMatrix, radius) -> int:
    """Ascent at a rational radius by exact rank stabilization.

    Least k with ``rank((T - radius I)^k) = rank((T - radius I)^{k+1})``,
    computed by fraction-free elimination.  Primary oracle for
    :func:`ascent` on planted rational instances.
    """
    rho = Fraction(radius)
    rows = matrix.rational_rows()
    n = matrix.n
    shifted = oracle.shifted_exact(rows, rho)
    power = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    rank_prev = n
    for k in range(n + 1):
        power = oracle.matmul_exact(power, shifted)
        rank_next = oracle.exact_rank(power)
        if rank_next == rank_prev:
            return k
        rank_prev = rank_next
    raise InvariantViolation("exact-ascent-unbounded", "rank sequence failed to stabilize")
