"""Independent brute-force ground truth.

Two unrelated toolboxes live here on purpose, kept apart from the fast
implementations they validate:

* exhaustive subset enumeration (bitmask based) classifying every subset of
  ``{0..n-1}`` as invariant / co-invariant / convex / admissible /
  irreducible directly from the definitions, for ``n <= 16``;
* exact rational linear algebra over :class:`fractions.Fraction`:
  fraction-free (Bareiss) rank, algebraic multiplicities, solves and
  inverses.

Nothing in this module reuses the BFS shortcuts of :mod:`matom.sets` beyond
the one-step image, and nothing uses floating point.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError, InvariantViolation
from .matrix import NonnegativeMatrix
from . import sets
from .sets import as_support

ENUMERATION_CAP = 16  # 2^16 subsets keeps full classification at desk scale


def mask_to_set(mask: int) -> frozenset:
    out = set()
    k = 0
    while mask:
        if mask & 1:
            out.add(k)
        mask >>= 1
        k += 1
    return frozenset(out)


def set_to_mask(members: Iterable[int]) -> int:
    mask = 0
    for x in members:
        mask |= 1 << x
    return mask


@dataclass(frozen=True)
class EnumeratedFamilies:
    """Every subset of {0..n-1} classified by direct definition checks."""

    n: int
    invariant: tuple[int, ...]
    co_invariant: tuple[int, ...]
    convex: tuple[int, ...]
    admissible: tuple[int, ...]
    irreducible: tuple[int, ...]
    future_of: tuple[int, ...]  # indexed by subset mask
    past_of: tuple[int, ...]
    sigma_class_of: tuple[int, ...]  # per node: its class in the sigma-field of invariants

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def future(self, members: Iterable[int]) -> frozenset:
        return mask_to_set(self.future_of[set_to_mask(members)])

    def past(self, members: Iterable[int]) -> frozenset:
        return mask_to_set(self.past_of[set_to_mask(members)])

    def minimal_nonempty(self, family: Sequence[int]) -> tuple[int, ...]:
        """Members with no nonempty proper sub-member in the family.

        Counting members inside every mask with a subset-sum sweep keeps
        this linear in ``n * 2^n`` even for families holding most subsets.
        """
        count = [0] * (self.full_mask + 1)
        for m in family:
            if m:
                count[m] += 1
        for bit in range(self.n):
            b = 1 << bit
            for a in range(self.full_mask + 1):
                if a & b:
                    count[a] += count[a ^ b]
        return tuple(sorted(m for m in family if m and count[m] == 1))

    def maximal(self, family: Sequence[int]) -> tuple[int, ...]:
        """Members with no proper super-member in the family."""
        count = [0] * (self.full_mask + 1)
        for m in family:
            count[m] += 1
        for bit in range(self.n):
            b = 1 << bit
            for a in range(self.full_mask, -1, -1):
                if not a & b:
                    count[a] += count[a | b]
        return tuple(sorted(m for m in family if count[m] == 1))


def enumerate_families(operator, threshold: float = 1e-12) -> EnumeratedFamilies:
    """Classify all ``2^n`` subsets by exhausting the definitions (n <= 16)."""
    g = as_support(operator, threshold)
    n = g.n
    if n > ENUMERATION_CAP:
        raise InputError(f"enumeration supports n <= {ENUMERATION_CAP}, got {n}")
    full = (1 << n) - 1
    out_mask = [set_to_mask(g.succ[j]) for j in range(n)]
    in_mask = [set_to_mask(g.pred[i]) for i in range(n)]

    # one-step image of every subset, by dynamic programming on the low bit
    img = _image_table(out_mask, n)
    img_t = _image_table(in_mask, n)

    invariant = [a for a in range(full + 1) if img[a] & ~a & full == 0]
    co_invariant = [a for a in range(full + 1) if img_t[a] & ~a & full == 0]

    # future = intersection of invariant supersets (the definition, valid
    # because invariants are intersection-closed); on instances where that
    # scan would be quadratic in a huge family, fall back to the least
    # fixpoint of the image map, which produces the same minimal set
    if (len(invariant) + len(co_invariant)) << n <= 1 << 24:
        future_of = _min_superset_table(invariant, full)
        past_of = _min_superset_table(co_invariant, full)
    else:
        future_of = _image_fixpoint_table(img, full)
        past_of = _image_fixpoint_table(img_t, full)

    convex = [a for a in range(full + 1) if (future_of[a] & past_of[a]) == a]

    # class of a node in the sigma-field generated by the invariant sets:
    # intersect the invariant sets containing it, remove those avoiding it
    sigma_class = []
    for x in range(n):
        bit = 1 << x
        inter = full
        union_avoiding = 0
        for b in invariant:
            if b & bit:
                inter &= b
            else:
                union_avoiding |= b
        sigma_class.append(inter & ~union_avoiding & full)
    admissible = []
    for a in range(full + 1):
        cover = 0
        rest = a
        while rest:
            low = rest & -rest
            cover |= sigma_class[low.bit_length() - 1]
            rest ^= low
        if cover == a:
            admissible.append(a)

    # irreducible: nonempty, and the restricted operator has only trivial
    # invariant subsets -- checked on every proper nonempty submask
    irreducible = []
    for a in range(1, full + 1):
        if _only_trivial_invariant_subsets(a, img):
            irreducible.append(a)

    return EnumeratedFamilies(
        n=n,
        invariant=tuple(invariant),
        co_invariant=tuple(co_invariant),
        convex=tuple(convex),
        admissible=tuple(admissible),
        irreducible=tuple(irreducible),
        future_of=tuple(future_of),
        past_of=tuple(past_of),
        sigma_class_of=tuple(sigma_class),
    )


def _image_table(out_mask: list[int], n: int) -> list[int]:
    full = 1 << n
    img = [0] * full
    for a in range(1, full):
        low = a & -a
        img[a] = img[a ^ low] | out_mask[low.bit_length() - 1]
    return img


def _min_superset_table(family: list[int], full: int) -> list[int]:
    table = [0] * (full + 1)
    for a in range(full + 1):
        acc = full
        for b in family:
            if a & b == a:
                acc &= b
        table[a] = acc
    return table


def _image_fixpoint_table(img: list[int], full: int) -> list[int]:
    table = [0] * (full + 1)
    for a in range(full + 1):
        cur = a
        nxt = cur | img[cur]
        while nxt != cur:
            cur = nxt
            nxt = cur | img[cur]
        table[a] = cur
    return table


def _only_trivial_invariant_subsets(a: int, img: list[int]) -> bool:
    # invariance of b for the restriction to a: image(b) within a stays in b
    sub = (a - 1) & a
    while sub:
        if img[sub] & a & ~sub == 0:
            return False
        sub = (sub - 1) & a
    return True


def boolean_reachability(operator, members: Iterable[int], threshold: float = 1e-12) -> frozenset:
    """Reachability closure via boolean powers of ``I or T``.

    Computes the support of ``(I | T)^(n-1) 1_A`` in the boolean semiring,
    a matrix-power route independent of BFS; it must equal the future.
    """
    g = as_support(operator, threshold)
    a = sets.validate_subset(g, members)
    if not a:
        return frozenset()
    reach = g.to_bool_matrix() | np.eye(g.n, dtype=bool)
    power = _bool_matrix_power(reach, max(g.n - 1, 1))
    vec = np.zeros(g.n, dtype=bool)
    vec[sorted(a)] = True
    hit = power @ vec
    return frozenset(int(i) for i in np.nonzero(hit)[0])


def _bool_matrix_power(m: np.ndarray, k: int) -> np.ndarray:
    result = np.eye(m.shape[0], dtype=bool)
    base = m.copy()
    while k:
        if k & 1:
            result = result @ base
        base = base @ base
        k >>= 1
    return result


# ---------------------------------------------------------------------------
# Exact rational linear algebra
# ---------------------------------------------------------------------------


def _to_fraction_rows(rows) -> list[list[Fraction]]:
    if isinstance(rows, NonnegativeMatrix):
        return rows.rational_rows()
    return [[Fraction(x) for x in row] for row in rows]


def _to_integer_rows(rows: list[list[Fraction]]) -> list[list[int]]:
    out = []
    for row in rows:
        scale = 1
        for x in row:
            scale = scale * x.denominator // gcd(scale, x.denominator)
        out.append([int(x * scale) for x in row])
    return out


def exact_rank(rows) -> int:
    """Rank of a rational matrix by fraction-free (Bareiss) elimination.

    Rows are scaled to integers first; all intermediate divisions are exact,
    which keeps coefficient growth polynomial instead of exponential.
    """
    m = _to_integer_rows(_to_fraction_rows(rows))
    if not m:
        return 0
    nrows, ncols = len(m), len(m[0])
    rank = 0
    prev = 1
    row = 0
    for col in range(ncols):
        pivot = next((i for i in range(row, nrows) if m[i][col] != 0), None)
        if pivot is None:
            continue
        m[row], m[pivot] = m[pivot], m[row]
        p = m[row][col]
        for i in range(row + 1, nrows):
            for j in range(col + 1, ncols):
                num = m[i][j] * p - m[i][col] * m[row][j]
                q, r = divmod(num, prev)
                if r:
                    raise InvariantViolation(
                        "bareiss-exact-division", "non-exact division in Bareiss elimination"
                    )
                m[i][j] = q
            m[i][col] = 0
        prev = p
        rank += 1
        row += 1
        if row == nrows:
            break
    return rank


def matmul_exact(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]):
    n, k, m = len(a), len(b), len(b[0])
    return [[sum((a[i][t] * b[t][j] for t in range(k)), Fraction(0)) for j in range(m)] for i in range(n)]


def shifted_exact(rows, lam: Fraction) -> list[list[Fraction]]:
    """``M - lam*I`` over Fractions."""
    m = _to_fraction_rows(rows)
    lam = Fraction(lam)
    return [
        [x - lam if i == j else x for j, x in enumerate(row)] for i, row in enumerate(m)
    ]


def exact_multiplicity(rows, lam) -> int:
    """Algebraic multiplicity of ``lam``: ``n - rank((M - lam I)^n)``."""
    m = _to_fraction_rows(rows)
    n = len(m)
    if n == 0:
        return 0
    shifted = shifted_exact(m, Fraction(lam))
    power = _identity(n)
    for _ in range(n):
        power = matmul_exact(power, shifted)
    return n - exact_rank(power)


def _identity(n: int) -> list[list[Fraction]]:
    return [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]


def exact_solve(a_rows, b_cols) -> list[list[Fraction]]:
    """Solve ``A X = B`` exactly (Gaussian elimination with exact pivoting).

    ``b_cols`` is given column by column; raises on a singular system.
    """
    a = _to_fraction_rows(a_rows)
    n = len(a)
    b = [[Fraction(x) for x in col] for col in b_cols]
    aug = [a[i][:] + [col[i] for col in b] for i in range(n)]
    for col in range(n):
        pivot = next((i for i in range(col, n) if aug[i][col] != 0), None)
        if pivot is None:
            raise InputError("singular system in exact solve")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for i in range(n):
            if i != col and aug[i][col] != 0:
                factor = aug[i][col]
                aug[i] = [x - factor * y for x, y in zip(aug[i], aug[col])]
    return [[aug[i][n + k] for i in range(n)] for k in range(len(b))]


def exact_inverse(rows) -> list[list[Fraction]]:
    a = _to_fraction_rows(rows)
    n = len(a)
    cols = exact_solve(a, [[Fraction(1 if i == j else 0) for i in range(n)] for j in range(n)])
    return [[cols[j][i] for j in range(n)] for i in range(n)]


# ---------------------------------------------------------------------------
# Experimental probe (open question, reported but never asserted)
# ---------------------------------------------------------------------------


def restriction_admissibility_probe(operator, trials: int = 200, seed: int = 0) -> dict:
    """Probe whether restriction to an admissible set preserves admissibility.

    For random admissible sets S and random subsets A of S, compares
    admissibility of A for the original operator against admissibility for
    the operator restricted to S.  The outcome is reported, never asserted:
    whether the two always agree is an open question.
    """
    g = as_support(operator)
    part_atoms = sets.strongly_connected_components(g)
    rng = random.Random(seed)
    agreements = 0
    disagreements = 0
    witnesses: list[dict] = []
    for _ in range(trials):
        chosen = [atom for atom in part_atoms if rng.random() < 0.6]
        if not chosen:
            continue
        omega = frozenset().union(*chosen)
        members = [x for x in omega if rng.random() < 0.7]
        if not members:
            continue
        sub = frozenset(members)
        original = sets.is_admissible(g, sub)
        restricted = sets.is_admissible(sets.restrict(g, omega), sub)
        if original == restricted:
            agreements += 1
        else:
            disagreements += 1
            if len(witnesses) < 5:
                witnesses.append({"restricted_to": sorted(omega), "subset": sorted(sub)})
    return {
        "trials": agreements + disagreements,
        "agreements": agreements,
        "disagreements": disagreements,
        "witnesses": witnesses,
    }
