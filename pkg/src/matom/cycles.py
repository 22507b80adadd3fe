"""Cyclic structure of atoms under matrix powers.

An atom with period p (gcd of its internal closed-walk lengths) splits under
the n-th power into ``gcd(p, n)`` cyclic classes that the one-step image
permutes cyclically; each class is an atom of the n-th power.  Everything
here is support-level: powers are boolean, so no rounding can perturb the
structure.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from .errors import InputError, InvariantViolation
from . import sets
from .atoms import AtomPartition, atoms
from .sets import SupportGraph, as_support


def period(operator, atom_members) -> int:
    """Period of an atom: gcd of the closed-walk lengths inside it.

    Computed from BFS level differences: every internal edge ``u -> v``
    contributes ``level(u) + 1 - level(v)`` to the gcd.  Requires at least
    one internal edge (a zero atom has no closed walk).
    """
    g = as_support(operator)
    members = sets.validate_subset(g, atom_members)
    if not sets.is_irreducible(g, members):
        raise InputError(f"{sorted(members)} is not an atom (not strongly connected)")
    levels = _bfs_levels(g, members, min(members))
    p = 0
    for u in members:
        for v in g.succ[u]:
            if v in members:
                p = gcd(p, levels[u] + 1 - levels[v])
    if p == 0:
        raise InputError("period undefined for a zero atom (no internal edge)")
    return p


def _bfs_levels(g: SupportGraph, members: frozenset, root: int) -> dict[int, int]:
    levels = {root: 0}
    frontier = [root]
    while frontier:
        nxt = []
        for u in frontier:
            for v in g.succ[u]:
                if v in members and v not in levels:
                    levels[v] = levels[u] + 1
                    nxt.append(v)
        frontier = nxt
    return levels


@dataclass(frozen=True)
class CyclicDecomposition:
    """Partition of one atom into the cyclic classes of a matrix power."""

    atom: frozenset
    power: int
    count: int  # number of classes; always divides the power
    classes: tuple[frozenset, ...]  # classes[k] = image^k(classes[0]) within the atom


def cyclic_classes(operator, atom_members, power: int) -> CyclicDecomposition:
    """Split a non-zero atom into the atoms of the ``power``-th matrix power.

    The class count is ``gcd(period, power)``; class 0 is the BFS residue
    class of the smallest member, and successive classes are its successive
    images inside the atom.  Each class is verified to be an atom of the
    boolean ``power``-th matrix power, the classes are verified to
    partition the atom, and the image is verified to rotate them.
    """
    if power < 1:
        raise InputError("power must be at least 1")
    g = as_support(operator)
    members = sets.validate_subset(g, atom_members)
    p = period(g, members)
    d = gcd(p, power)
    levels = _bfs_levels(g, members, min(members))
    class0 = frozenset(x for x in members if levels[x] % d == 0)
    classes = [class0]
    for _ in range(d - 1):
        classes.append(sets.image(g, classes[-1]) & members)

    if frozenset().union(*classes) != members or sum(len(c) for c in classes) != len(members):
        raise InvariantViolation(
            "cyclic-classes-partition",
            f"cyclic classes do not partition the atom {sorted(members)}",
        )
    for k, cls in enumerate(classes):
        rotated = cls
        for _ in range(d):
            rotated = sets.image(g, rotated) & members
        if rotated != cls:
            raise InvariantViolation(
                "cyclic-classes-rotation",
                f"image^{d} does not fix class {k} of atom {sorted(members)}",
            )
    power_parts = set(power_atoms(g, power).atoms)
    for cls in classes:
        if cls not in power_parts:
            raise InvariantViolation(
                "cyclic-classes-power-atoms",
                f"class {sorted(cls)} is not an atom of the {power}-th power",
            )
    return CyclicDecomposition(atom=members, power=power, count=d, classes=tuple(classes))


def covering_steps(operator, members) -> int:
    """Least m such that A, T(A), ..., T^{m-1}(A) jointly cover everything.

    Defined for an irreducible non-zero operator and a nonempty set; the
    answer is at most the dimension.
    """
    g = as_support(operator)
    a = sets.validate_subset(g, members)
    if not a:
        raise InputError("covering steps require a nonempty set")
    full = frozenset(range(g.n))
    if not sets.is_irreducible(g, full):
        raise InputError("covering steps are defined for irreducible operators")
    if g.edge_count == 0:
        raise InputError("covering steps are defined for non-zero operators")
    covered = a
    current = a
    steps = 1
    while covered != full:
        current = sets.image(g, current)
        covered |= current
        steps += 1
        if steps > g.n + 1:
            raise InvariantViolation(
                "covering-steps-bound", "cover did not close within the dimension bound"
            )
    return steps


def power_atoms(operator, power: int, threshold: float = 1e-12) -> AtomPartition:
    """Atom partition of the boolean ``power``-th power of the support graph.

    Each atom of the power is contained in an atom of the base operator;
    this containment is asserted.
    """
    if power < 1:
        raise InputError("power must be at least 1")
    g = as_support(operator, threshold)
    adj = g.to_bool_matrix()
    powered = np.eye(g.n, dtype=bool) if power == 0 else adj.copy()
    for _ in range(power - 1):
        powered = powered @ adj  # bool matmul is the boolean semiring product
    part = atoms(sets.graph_from_bool(powered))
    base = atoms(g)
    for comp in part.atoms:
        anchors = {base.atom_of[x] for x in comp}
        if len(anchors) != 1:
            raise InvariantViolation(
                "power-atoms-containment",
                f"power-atom {sorted(comp)} straddles several base atoms",
            )
    return part
