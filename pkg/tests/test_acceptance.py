"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (add ``-s`` to see the
per-criterion lines as they happen).
"""

import random
from contextlib import contextmanager
from fractions import Fraction
from math import gcd

import numpy as np
import pytest

from matom import (
    NonnegativeMatrix,
    atom_order,
    atoms,
    classify_monatomic,
    critical_structure,
    cyclic_classes,
    decompose_nonnegative_eigenvector,
    distinguished_atoms,
    distinguished_eigenvector,
    exact_ascent,
    future,
    is_admissible,
    is_co_invariant,
    is_convex,
    is_invariant,
    is_irreducible,
    multiplicity_decomposition,
    past,
    power_atoms,
    radius_multiplicity,
    resolvent,
    restrict,
    spectral_profile,
    strict_future,
    strict_past,
    support_graph,
    vector_index,
    verify_atom_characterizations,
)
from matom.ascent import basis_matrix
from matom.oracle import boolean_reachability, enumerate_families, exact_rank, mask_to_set
from matom.sets import graph_from_bool

from randgen import (
    cycle_matrix,
    planted_blocks,
    planted_critical,
    random_subset,
    random_support_matrix,
)


@contextmanager
def criterion(number, description):
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {number:02d} FAIL: {description}")
        raise
    print(f"ACCEPTANCE {number:02d} PASS: {description}")


@pytest.fixture(scope="module")
def planted_suite():
    rng = random.Random(20240809)
    out = []
    for _ in range(200):
        inst = planted_critical(rng)
        prof = spectral_profile(inst.dense)
        out.append((inst, prof, critical_structure(prof)))
    return out


def all_subsets(n):
    for mask in range(1 << n):
        yield frozenset(i for i in range(n) if mask >> i & 1)


def support_of(w):
    scale = float(np.abs(w).max())
    return frozenset(int(i) for i in np.nonzero(np.abs(w) > 1e-12 * scale)[0])


def test_criterion_01_finite_example_golden(six_node):
    with criterion(1, "six-node example: atoms, invariant sets, convexity, futures"):
        part = atoms(six_node)
        assert sorted(sorted(a) for a in part.atoms) == [[0, 1, 2], [3], [4], [5]]

        invariant = [a for a in all_subsets(6) if is_invariant(six_node, a)]
        assert sorted(map(sorted, invariant)) == sorted(
            map(sorted, [set(), {3, 4, 5}, {3, 5}, {4, 5}, {5}, {0, 1, 2, 3, 4, 5}])
        )

        assert is_convex(six_node, {0, 1, 2, 3})
        assert is_convex(six_node, {4})
        assert is_convex(six_node, {4, 5})
        assert not is_convex(six_node, {0, 1, 2, 3, 5})  # complement of a parallel node

        assert future(six_node, frozenset({3}) & frozenset({4})) == frozenset()
        assert future(six_node, {3}) & future(six_node, {4}) == frozenset({5})

        assert frozenset({4}) <= future(six_node, {0, 1, 2, 3})
        assert 3 not in past(six_node, {4})


def test_criterion_02_two_atom_defective_example(graph_supp):
    with criterion(2, "feeder/fed pair: unique eigenvectors, multiplicity 2, not monatomic"):
        prof = spectral_profile(graph_supp)
        assert len(prof.partition) == 2

        verdict = classify_monatomic(graph_supp)
        assert not verdict.is_monatomic
        u, v = verdict.right_vector, verdict.left_vector
        assert u is not None and v is not None
        # unique rays, proportional to (0,1) and (1,0): here exactly equal
        assert u.tolist() == [0.0, 1.0]
        assert v.tolist() == [1.0, 0.0]
        assert support_of(u) & support_of(v) == frozenset()

        dense = graph_supp.to_float()
        assert np.abs(dense @ u - 1.0 * u).max() <= 1e-10
        assert np.abs(dense.T @ v - 1.0 * v).max() <= 1e-10
        assert radius_multiplicity(prof) == 2


def test_criterion_03_atom_characterization_equivalence(six_node):
    with criterion(3, "four atom characterizations agree on 200 random instances + example"):
        assert verify_atom_characterizations(six_node).agree
        rng = random.Random(31)
        for _ in range(200):
            m = random_support_matrix(rng, n=rng.randint(1, 10))
            report = verify_atom_characterizations(m)
            assert report.agree
            assert set(report.components) == set(atoms(m).atoms)


def test_criterion_04_multiplicity_decomposition():
    with criterion(4, "exact multiplicity equals per-atom sum on 100 rational instances"):
        rng = random.Random(99)
        for _ in range(100):
            inst = planted_blocks(rng)
            for lam in inst.candidates:
                if lam == 0:
                    continue
                dec = multiplicity_decomposition(inst.exact, lam)
                assert dec.total == sum(dec.per_atom.values())  # exact integers


def test_criterion_05_ascent_equals_exact_and_max_height(planted_suite):
    with criterion(5, "ascent = exact rank stabilization = max critical height, 200 plants"):
        pair = NonnegativeMatrix([[1, 1], [0, 1]], backend="exact")
        cs_pair = critical_structure(spectral_profile(NonnegativeMatrix([[1, 1], [0, 1]])))
        assert cs_pair.ascent == exact_ascent(pair, 1) == 2
        anti = NonnegativeMatrix([[1, 0], [0, 1]], backend="exact")
        cs_anti = critical_structure(spectral_profile(NonnegativeMatrix([[1, 0], [0, 1]])))
        assert cs_anti.ascent == exact_ascent(anti, 1) == 1

        for inst, prof, cs in planted_suite:
            assert cs.ascent == inst.expected_ascent
            assert cs.ascent == max(cs.heights.values())
            assert exact_ascent(inst.exact, inst.radius) == inst.expected_ascent


def test_criterion_06_eigencone(planted_suite):
    with criterion(6, "eigencone: residuals <= 1e-10, supports exact, independent, recoverable"):
        for inst, prof, _ in planted_suite:
            dense = inst.dense.to_float()
            for value, group in distinguished_atoms(prof).items():
                vectors = []
                for atom_id in group:
                    w = distinguished_eigenvector(prof, atom_id)
                    vectors.append(w)
                    scale = float(np.abs(w).max())
                    assert np.abs(dense @ w - value * w).max() <= 1e-10 * value * scale
                    assert support_of(w) == future(inst.dense, prof.atom(atom_id).members)
                rows = [[Fraction(float(x)) for x in w] for w in vectors]
                assert exact_rank(rows) == len(group)

                coeffs = {a: float(k % 3 + 1) for k, a in enumerate(group)}
                v = sum(c * w for c, w in zip(coeffs.values(), vectors))
                recovered = decompose_nonnegative_eigenvector(prof, v, value)
                for a in group:
                    assert abs(recovered[a] - coeffs[a]) <= 1e-8


def test_criterion_07_basis_matrix_structure(planted_suite):
    rng = random.Random(7)
    with criterion(7, "basis matrix: rho diagonal, triangular zeros, positive covers"):
        for inst, prof, cs in planted_suite:
            rho = cs.radius
            pos = {a: k for k, a in enumerate(cs.atom_ids)}
            cover_set = set(cs.covers)
            for a in cs.atom_ids:
                for b in cs.atom_ids:
                    entry = cs.basis_matrix[pos[a], pos[b]]
                    if a == b:
                        assert abs(entry - rho) <= 1e-9 * rho
                    elif b not in prof.poset.strictly_below(a):
                        assert abs(entry) <= 1e-9 * rho
                    elif (a, b) in cover_set:
                        assert entry >= 1e-6 * rho

            # the structure is a property of any basis pinned to the Perron
            # parts: randomly mix in strictly-lower vectors and re-derive
            if len(cs.atom_ids) >= 2:
                perturbed = list(cs.basis)
                for a in cs.atom_ids:
                    for b in cs.atom_ids:
                        if b != a and prof.poset.leq(b, a):
                            perturbed[pos[a]] = (
                                perturbed[pos[a]] + rng.uniform(-0.5, 0.5) * cs.basis[pos[b]]
                            )
                redone = basis_matrix(prof, cs.atom_ids, tuple(perturbed), cs.covers)
                assert np.abs(np.diag(redone) - rho).max() <= 1e-8 * rho
                for a, w in zip(cs.atom_ids, perturbed):
                    assert vector_index(inst.dense, w, rho) == cs.heights[a]


def test_criterion_08_periodicity(two_cycle, kernel_k3):
    with criterion(8, "cyclic classes: gcd counts, divisor law, partitions; both examples"):
        for length in range(2, 9):
            m = cycle_matrix(length)
            members = frozenset(range(length))
            for n in range(1, 9):
                expected = gcd(length, n)
                assert len(power_atoms(m, n).atoms) == expected
                dec = cyclic_classes(m, members, n)
                assert dec.count == expected
                assert n % dec.count == 0
                assert frozenset().union(*dec.classes) == members
                assert sum(len(c) for c in dec.classes) == length

        dec = cyclic_classes(two_cycle, {0, 1}, 2)
        assert sorted(sorted(c) for c in dec.classes) == [[0], [1]]

        half = frozenset({0, 1})
        assert half in set(power_atoms(kernel_k3, 2).atoms)
        adj = support_graph(kernel_k3).to_bool_matrix()
        assert is_invariant(graph_from_bool(adj @ adj), half)
        assert half not in set(atoms(kernel_k3).atoms)


def test_criterion_09_quasi_nilpotent_remainder():
    with criterion(9, "restriction outside non-zero atoms is nilpotent at support level"):
        rng = random.Random(41)
        for _ in range(500):
            m = random_support_matrix(rng)
            prof = spectral_profile(m)
            rest = frozenset(range(m.n)) - frozenset().union(
                frozenset(), *(a.members for a in prof.atom_data if a.nonzero)
            )
            if not rest:
                continue
            idx = sorted(rest)
            block = m.to_float()[np.ix_(idx, idx)] > 0
            power = np.eye(len(idx), dtype=bool)
            for _ in range(len(idx)):
                power = power @ block
            assert not power.any()


def _count_at_least(count, needed=500):
    assert count >= needed, f"only {count} randomized cases exercised"


def test_criterion_10a_convexity_equivalences():
    with criterion(10, "convexity: five formulations agree (>= 500 cases)"):
        rng = random.Random(101)
        cases = 0
        while cases < 500:
            m = random_support_matrix(rng, n=rng.randint(1, 6))
            fam = enumerate_families(m)
            inv = [mask_to_set(x) for x in fam.invariant]
            coinv = [mask_to_set(x) for x in fam.co_invariant]
            for _ in range(4):
                a = random_subset(rng, m.n)
                sf, sp = strict_future(m, a), strict_past(m, a)
                by_definition = is_convex(m, a)
                assert by_definition == (not sf & sp)
                assert by_definition == is_invariant(m, sf)
                assert by_definition == is_co_invariant(m, sp)
                witness = any(b & c == a for b in inv for c in coinv)
                assert by_definition == witness
                cases += 1
        _count_at_least(cases)


def test_criterion_10b_future_past_duality():
    with criterion(10, "future/past duality triple equivalence (>= 500 cases, n <= 64)"):
        rng = random.Random(103)
        cases = 0
        while cases < 500:
            n = rng.choice([rng.randint(1, 10), rng.randint(10, 40), 64])
            m = random_support_matrix(rng, n=n, density=min(0.5, 3.0 / n))
            for _ in range(4):
                a, b = random_subset(rng, m.n), random_subset(rng, m.n)
                first = not (a & past(m, b))
                second = not (future(m, a) & past(m, b))
                third = not (future(m, a) & b)
                assert first == second == third
                cases += 1
        _count_at_least(cases)


def test_criterion_10c_convex_intersect_invariant():
    with criterion(10, "convex intersected with invariant stays convex (>= 500 cases)"):
        rng = random.Random(107)
        cases = 0
        while cases < 500:
            m = random_support_matrix(rng)
            for _ in range(4):
                seed = random_subset(rng, m.n)
                convex = future(m, seed) & past(m, seed)
                invariant = future(m, random_subset(rng, m.n))
                assert is_convex(m, convex & invariant)
                cases += 1
        _count_at_least(cases)


def test_criterion_10d_power_monotonicity():
    with criterion(10, "invariant/convex/admissible sets survive taking powers (>= 500)"):
        rng = random.Random(109)
        cases = 0
        while cases < 500:
            m = random_support_matrix(rng, max_n=7)
            adj = support_graph(m).to_bool_matrix()
            powered = adj.copy()
            for n in (2, 3, 4):
                powered = powered @ adj
                g_n = graph_from_bool(powered)
                inv = future(m, random_subset(rng, m.n))
                assert is_invariant(g_n, inv)
                seed = random_subset(rng, m.n)
                assert is_convex(g_n, future(m, seed) & past(m, seed))
                union = frozenset().union(
                    frozenset(), *(a for a in atoms(m).atoms if rng.random() < 0.5)
                )
                assert is_admissible(g_n, union)
                if is_irreducible(g_n, frozenset(range(m.n))):
                    assert is_irreducible(m, frozenset(range(m.n)))
                cases += 1
        _count_at_least(cases)


def test_criterion_10e_restricted_future():
    with criterion(10, "restriction to a convex set localizes futures (>= 500 cases)"):
        rng = random.Random(113)
        cases = 0
        while cases < 500:
            m = random_support_matrix(rng)
            g = support_graph(m)
            seed = random_subset(rng, m.n)
            omega = future(m, seed) & past(m, seed)
            if not omega:
                continue
            sub = restrict(g, omega)
            for _ in range(4):
                a = frozenset(x for x in omega if rng.random() < 0.6)
                assert future(sub, a) == future(g, a) & omega
                cases += 1
        _count_at_least(cases)


def test_criterion_10f_power_of_restriction():
    with criterion(10, "(T_A)^n equals (T^n)_A exactly on convex sets (>= 500 cases)"):
        rng = random.Random(127)
        cases = 0
        while cases < 500:
            m = random_support_matrix(rng, max_n=7)
            seed = random_subset(rng, m.n)
            omega = future(m, seed) & past(m, seed)
            if not omega:
                continue
            dense = m.to_float()
            mask = np.zeros(m.n, dtype=bool)
            mask[sorted(omega)] = True
            restricted = dense.copy()
            restricted[~mask, :] = 0.0
            restricted[:, ~mask] = 0.0
            for n in (2, 3, 4):
                lhs = np.linalg.matrix_power(restricted, n)
                full = np.linalg.matrix_power(dense, n)
                rhs = full.copy()
                rhs[~mask, :] = 0.0
                rhs[:, ~mask] = 0.0
                assert np.array_equal(lhs, rhs)  # small integers: exact float algebra
                cases += 1
        _count_at_least(cases)


def test_criterion_10g_resolvent_positive():
    with criterion(10, "resolvent positive with the same invariant sets (>= 500 cases)"):
        rng = random.Random(131)
        cases = 0
        while cases < 500:
            m = random_support_matrix(rng, max_n=7)
            prof = spectral_profile(m)
            value = prof.radius * 1.5 + 1.0
            r = resolvent(m, value)
            assert float(r.to_float().min()) >= 0.0
            assert set(enumerate_families(r).invariant) == set(enumerate_families(m).invariant)
            cases += 1
        _count_at_least(cases)


def test_criterion_10h_order_characterizations():
    with criterion(10, "four formulations of the atom order agree (>= 500 pairs)"):
        rng = random.Random(137)
        cases = 0
        while cases < 500:
            m = random_support_matrix(rng, max_n=7)
            poset = atom_order(m)  # also spot-asserted internally
            part = poset.partition
            for a in range(len(part)):
                fut = future(m, part.atoms[a])
                sfut = fut - part.atoms[a]
                for b in range(len(part)):
                    if a == b:
                        continue
                    expected = poset.leq(b, a)
                    assert expected == (part.atoms[b] <= fut)
                    assert expected == (part.atoms[b] <= sfut)
                    assert expected == (part.atoms[a] <= past(m, part.atoms[b]))
                    assert expected == (part.atoms[a] <= strict_past(m, part.atoms[b]))
                    cases += 1
        _count_at_least(cases)


def test_criterion_10i_minimal_distinguished_exists():
    with criterion(10, "below every non-zero atom sits a distinguished one (>= 500 atoms)"):
        rng = random.Random(139)
        cases = 0
        while cases < 500:
            m = random_support_matrix(rng)
            prof = spectral_profile(m)
            for a in prof.nonzero_ids:
                candidates = [
                    b
                    for b in prof.distinguished_ids
                    if prof.poset.leq(b, a)
                    and prof.atom(b).radius >= prof.atom(a).radius - prof.tie_tol
                ]
                assert candidates
                cases += 1
        _count_at_least(cases)


def test_criterion_10j_support_dichotomy():
    with criterion(10, "atoms in eigencone supports obey the dichotomy (>= 500 checks)"):
        rng = random.Random(149)
        cases = 0
        while cases < 500:
            m = random_support_matrix(rng)
            prof = spectral_profile(m)
            for value, group in distinguished_atoms(prof).items():
                for atom_id in group:
                    w = distinguished_eigenvector(prof, atom_id)
                    supp = support_of(w)
                    for a in prof.atom_data:
                        if not a.members <= supp:
                            continue
                        if a.radius < value - prof.tie_tol:
                            cases += 1
                            continue
                        assert abs(a.radius - value) <= prof.tie_tol
                        members = sorted(a.members)
                        part = w[members] / w[members].sum()
                        assert np.abs(part - a.perron[members]).max() <= 1e-9
                        assert not (supp & strict_past(m, a.members))
                        cases += 1
        _count_at_least(cases)


def test_criterion_10k_future_equals_boolean_power():
    with criterion(10, "future equals boolean matrix-power reachability (>= 500 cases)"):
        rng = random.Random(151)
        cases = 0
        while cases < 500:
            m = random_support_matrix(rng)
            for _ in range(4):
                a = random_subset(rng, m.n)
                assert boolean_reachability(m, a) == future(m, a)
                cases += 1
        _count_at_least(cases)
