"""Atoms (communicating blocks), the order between them, covers and heights.

Atoms of a nonnegative matrix are the strongly connected components of its
support graph.  They carry a partial order: ``B <= A`` when B lies in the
future of A, i.e. mass can flow from A down to B.  The canonical atom
numbering is topological (feeders first) with ties broken by the smallest
member index, so reports are deterministic.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InputError, InvariantViolation
from . import sets
from .sets import SupportGraph, as_support


@dataclass(frozen=True)
class AtomPartition:
    """Disjoint atoms covering {0..n-1}, in canonical order."""

    atoms: tuple[frozenset, ...]
    atom_of: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.atom_of)

    def __len__(self) -> int:
        return len(self.atoms)

    def index_of(self, members: Iterable[int]) -> int:
        """Atom index of the atom equal to ``members`` (error if no such atom)."""
        target = frozenset(members)
        for k, atom in enumerate(self.atoms):
            if atom == target:
                return k
        raise InputError(f"{sorted(target)} is not an atom of this partition")


@dataclass(frozen=True)
class AtomPoset:
    """Partial order on atoms: ``leq(b, a)`` iff atom b lies in the future of atom a."""

    partition: AtomPartition
    below: tuple[frozenset, ...]  # below[a]: downset of a (atom ids, including a)
    covers: tuple[tuple[int, int], ...]  # (a, b): a covers b, i.e. b < a with nothing between

    def leq(self, b: int, a: int) -> bool:
        return b in self.below[a]

    def strictly_below(self, a: int) -> frozenset:
        return self.below[a] - {a}

    def comparable(self, a: int, b: int) -> bool:
        return self.leq(a, b) or self.leq(b, a)


def atoms(operator, threshold: float = 1e-12) -> AtomPartition:
    """Atom partition of a matrix or support graph (SCC decomposition)."""
    g = as_support(operator, threshold)
    comps = sets.strongly_connected_components(g)
    order = _canonical_order(g, comps)
    atom_list = tuple(comps[k] for k in order)
    atom_of = [0] * g.n
    for idx, atom in enumerate(atom_list):
        for x in atom:
            atom_of[x] = idx
    return AtomPartition(atoms=atom_list, atom_of=tuple(atom_of))


def _condensation_succ(g: SupportGraph, comps: Sequence[frozenset]) -> list[set[int]]:
    comp_of = [0] * g.n
    for k, comp in enumerate(comps):
        for x in comp:
            comp_of[x] = k
    succ: list[set[int]] = [set() for _ in comps]
    for j in range(g.n):
        for i in g.succ[j]:
            a, b = comp_of[j], comp_of[i]
            if a != b:
                succ[a].add(b)
    return succ


def _canonical_order(g: SupportGraph, comps: Sequence[frozenset]) -> list[int]:
    # Kahn's algorithm on the condensation, feeders first; deterministic
    # tie-break by smallest member index.
    succ = _condensation_succ(g, comps)
    indeg = [0] * len(comps)
    for a in range(len(comps)):
        for b in succ[a]:
            indeg[b] += 1
    heap = [(min(comps[k]), k) for k in range(len(comps)) if indeg[k] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        _, k = heapq.heappop(heap)
        order.append(k)
        for b in succ[k]:
            indeg[b] -= 1
            if indeg[b] == 0:
                heapq.heappush(heap, (min(comps[b]), b))
    if len(order) != len(comps):
        raise InvariantViolation("condensation-acyclic", "condensation of SCCs has a cycle")
    return order


def atom_order(operator, partition: AtomPartition | None = None, verify: bool | None = None) -> AtomPoset:
    """Order, covers and reachability on the atoms of an operator.

    ``verify`` re-derives the order on every atom pair from futures and
    pasts of the underlying sets and cross-checks the four equivalent
    formulations; it defaults to on for n <= 64.
    """
    g = as_support(operator)
    part = partition if partition is not None else atoms(g)
    m = len(part)
    succ = _condensation_list(g, part)

    below: list[frozenset] = [frozenset()] * m
    # canonical order is topological (feeders first), so traverse in reverse
    for a in reversed(range(m)):
        acc = {a}
        for b in succ[a]:
            acc |= below[b]
        below[a] = frozenset(acc)

    covers = []
    for a in range(m):
        for b in sorted(succ[a]):
            if any(b in below[c] for c in succ[a] if c != b):
                continue  # reachable through a sibling: transitive edge
            covers.append((a, b))

    poset = AtomPoset(partition=part, below=tuple(below), covers=tuple(covers))
    if verify or (verify is None and g.n <= 64):
        _verify_order(g, poset)
    return poset


def _condensation_list(g: SupportGraph, part: AtomPartition) -> list[set[int]]:
    succ: list[set[int]] = [set() for _ in part.atoms]
    for j in range(g.n):
        for i in g.succ[j]:
            a, b = part.atom_of[j], part.atom_of[i]
            if a != b:
                succ[a].add(b)
    return succ


def _verify_order(g: SupportGraph, poset: AtomPoset) -> None:
    # The order has four equivalent set-level formulations; they must agree
    # with condensation reachability on every pair of distinct atoms.
    part = poset.partition
    for a in range(len(part)):
        fut = sets.future(g, part.atoms[a])
        sfut = fut - part.atoms[a]
        for b in range(len(part)):
            if a == b:
                continue
            expected = poset.leq(b, a)
            by_future = part.atoms[b] <= fut
            by_strict_future = part.atoms[b] <= sfut
            by_past = part.atoms[a] <= sets.past(g, part.atoms[b])
            by_strict_past = part.atoms[a] <= sets.strict_past(g, part.atoms[b])
            if not (expected == by_future == by_strict_future == by_past == by_strict_past):
                raise InvariantViolation(
                    "atom-order-characterizations",
                    f"order formulations disagree on atoms {sorted(part.atoms[a])} / "
                    f"{sorted(part.atoms[b])}",
                )


# ---------------------------------------------------------------------------
# Chains, antichains, heights
# ---------------------------------------------------------------------------


def is_antichain(poset: AtomPoset, atom_ids: Iterable[int]) -> bool:
    ids = list(atom_ids)
    return not any(
        poset.comparable(a, b) for i, a in enumerate(ids) for b in ids[i + 1 :] if a != b
    )


def subset_heights(poset: AtomPoset, atom_ids: Iterable[int]) -> dict[int, int]:
    """Heights within a subset of atoms: 1 + longest strict chain going down."""
    ids = set(atom_ids)
    heights: dict[int, int] = {}
    # process lower atoms first: canonical order lists feeders first
    for a in sorted(ids, reverse=True):
        lower = [heights[b] for b in poset.strictly_below(a) if b in ids]
        heights[a] = 1 + max(lower, default=0)
    return heights


def height(poset: AtomPoset, atom_ids: Iterable[int], atom_id: int) -> int:
    ids = set(atom_ids)
    if atom_id not in ids:
        raise InputError(f"atom {atom_id} is not in the given subset")
    return subset_heights(poset, ids)[atom_id]


def longest_chain(poset: AtomPoset, atom_ids: Iterable[int]) -> int:
    """Length (number of steps) of the longest strict chain within the subset."""
    ids = set(atom_ids)
    if not ids:
        return 0
    return max(subset_heights(poset, ids).values()) - 1


# ---------------------------------------------------------------------------
# Four-way characterization check (brute force, small n)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CharacterizationReport:
    """The four independently computed atom families and their agreement."""

    components: tuple[frozenset, ...]
    minimal_convex: tuple[frozenset, ...]
    admissible_irreducible: tuple[frozenset, ...]
    maximal_irreducible: tuple[frozenset, ...]

    @property
    def agree(self) -> bool:
        base = set(self.components)
        return (
            base == set(self.minimal_convex)
            and base == set(self.admissible_irreducible)
            and base == set(self.maximal_irreducible)
        )


def verify_atom_characterizations(operator, threshold: float = 1e-12) -> CharacterizationReport:
    """Recompute atoms four independent ways by full subset enumeration.

    The families (SCCs; minimal nonempty convex sets; admissible irreducible
    sets; maximal irreducible sets) coincide in theory.  Enumeration is
    capped at n <= 16.
    """
    from . import oracle  # local import: oracle is the heavyweight brute-force layer

    g = as_support(operator, threshold)
    fam = oracle.enumerate_families(g)
    components = tuple(sorted(atoms(g).atoms, key=_atom_key))
    minimal_convex = tuple(
        sorted((oracle.mask_to_set(m) for m in fam.minimal_nonempty(fam.convex)), key=_atom_key)
    )
    adm_irr = tuple(
        sorted(
            (oracle.mask_to_set(m) for m in fam.irreducible if m in set(fam.admissible)),
            key=_atom_key,
        )
    )
    maximal_irr = tuple(
        sorted((oracle.mask_to_set(m) for m in fam.maximal(fam.irreducible)), key=_atom_key)
    )
    return CharacterizationReport(
        components=tuple(sorted(components, key=_atom_key)),
        minimal_convex=minimal_convex,
        admissible_irreducible=adm_irr,
        maximal_irreducible=maximal_irr,
    )


def _atom_key(a: frozenset) -> tuple:
    return tuple(sorted(a))
