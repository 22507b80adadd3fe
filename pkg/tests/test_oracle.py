import random
from fractions import Fraction

import numpy as np
import pytest

from matom import (
    InputError,
    NonnegativeMatrix,
    atoms,
    future,
    is_admissible,
    is_co_invariant,
    is_convex,
    is_invariant,
    is_irreducible,
)
from matom.oracle import (
    boolean_reachability,
    enumerate_families,
    exact_multiplicity,
    exact_rank,
    mask_to_set,
    restriction_admissibility_probe,
    set_to_mask,
)

from randgen import random_subset, random_support_matrix


def fraction_gauss_rank(rows):
    """Naive rational Gaussian elimination, as an independent check of Bareiss."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return 0
    nrows, ncols = len(m), len(m[0])
    rank = 0
    row = 0
    for col in range(ncols):
        pivot = next((i for i in range(row, nrows) if m[i][col] != 0), None)
        if pivot is None:
            continue
        m[row], m[pivot] = m[pivot], m[row]
        for i in range(row + 1, nrows):
            if m[i][col] != 0:
                factor = m[i][col] / m[row][col]
                m[i] = [x - factor * y for x, y in zip(m[i], m[row])]
        rank += 1
        row += 1
        if row == nrows:
            break
    return rank


class TestEnumeration:
    def test_six_node_invariant_family(self, six_node):
        fam = enumerate_families(six_node)
        found = sorted(sorted(mask_to_set(m)) for m in fam.invariant)
        assert found == sorted(
            map(sorted, [set(), {3, 4, 5}, {3, 5}, {4, 5}, {5}, {0, 1, 2, 3, 4, 5}])
        )

    def test_volterra_invariant_suffixes(self, volterra4):
        fam = enumerate_families(volterra4)
        assert sorted(sorted(mask_to_set(m)) for m in fam.invariant) == [
            [],
            [0, 1, 2, 3],
            [1, 2, 3],
            [2, 3],
            [3],
        ]

    def test_trivial_one_node(self):
        fam = enumerate_families(NonnegativeMatrix([[0]]))
        assert fam.invariant == (0, 1)
        assert fam.convex == (0, 1)
        assert fam.admissible == (0, 1)
        assert fam.irreducible == (1,)

    def test_sigma_classes_are_components(self):
        rng = random.Random(3)
        for _ in range(40):
            m = random_support_matrix(rng, max_n=7)
            fam = enumerate_families(m)
            part = atoms(m)
            for x in range(m.n):
                assert mask_to_set(fam.sigma_class_of[x]) == part.atoms[part.atom_of[x]]

    def test_families_match_set_calculus(self):
        rng = random.Random(5)
        for _ in range(30):
            m = random_support_matrix(rng, n=rng.randint(1, 10))
            fam = enumerate_families(m)
            inv, coi = set(fam.invariant), set(fam.co_invariant)
            cvx, adm, irr = set(fam.convex), set(fam.admissible), set(fam.irreducible)
            for mask in range(1 << m.n):
                a = mask_to_set(mask)
                assert is_invariant(m, a) == (mask in inv)
                assert is_co_invariant(m, a) == (mask in coi)
                assert is_convex(m, a) == (mask in cvx)
                assert is_admissible(m, a) == (mask in adm)
                assert is_irreducible(m, a) == (mask in irr)

    def test_futures_match_bfs(self):
        rng = random.Random(7)
        for _ in range(30):
            m = random_support_matrix(rng, n=rng.randint(1, 7))
            fam = enumerate_families(m)
            for _ in range(8):
                a = random_subset(rng, m.n)
                assert fam.future(a) == future(m, a)

    def test_future_routes_agree(self):
        from matom.oracle import _image_fixpoint_table, _image_table, _min_superset_table, set_to_mask

        rng = random.Random(8)
        for _ in range(30):
            m = random_support_matrix(rng, n=rng.randint(1, 8))
            g = __import__("matom").support_graph(m)
            full = (1 << m.n) - 1
            out_mask = [set_to_mask(g.succ[j]) for j in range(m.n)]
            img = _image_table(out_mask, m.n)
            invariant = [a for a in range(full + 1) if img[a] & ~a & full == 0]
            assert _min_superset_table(invariant, full) == _image_fixpoint_table(img, full)

    def test_pathological_dense_invariant_family_is_fast(self):
        # the zero matrix has every subset invariant; the fixpoint route keeps
        # the enumeration at the cap tractable
        fam = enumerate_families(NonnegativeMatrix([[0.0] * 16 for _ in range(16)]))
        assert len(fam.invariant) == 1 << 16
        assert fam.future({3, 7}) == frozenset({3, 7})

    def test_invariants_closed_under_union_and_intersection(self):
        rng = random.Random(11)
        for _ in range(30):
            m = random_support_matrix(rng, max_n=6)
            fam = enumerate_families(m)
            inv = set(fam.invariant)
            for a in fam.invariant:
                for b in fam.invariant:
                    assert (a | b) in inv and (a & b) in inv

    def test_invariants_of_powers_grow(self):
        from matom.sets import graph_from_bool, support_graph

        rng = random.Random(13)
        for _ in range(30):
            m = random_support_matrix(rng, max_n=6)
            adj = support_graph(m).to_bool_matrix()
            fam1 = set(enumerate_families(m).invariant)
            power = adj.copy()
            for _ in range(2):
                power = power @ adj
            fam_n = set(enumerate_families(graph_from_bool(power)).invariant)
            assert fam1 <= fam_n

    def test_minimal_and_maximal_selectors(self, six_node):
        fam = enumerate_families(six_node)
        minimal_convex = {mask_to_set(m) for m in fam.minimal_nonempty(fam.convex)}
        assert minimal_convex == {
            frozenset({0, 1, 2}),
            frozenset({3}),
            frozenset({4}),
            frozenset({5}),
        }
        maximal_irr = {mask_to_set(m) for m in fam.maximal(fam.irreducible)}
        assert maximal_irr == minimal_convex

    def test_cap(self):
        with pytest.raises(InputError, match="n <= 16"):
            enumerate_families(NonnegativeMatrix([[0.0] * 17 for _ in range(17)]))

    def test_mask_round_trip(self):
        assert set_to_mask(mask_to_set(0b10110)) == 0b10110


class TestBooleanReachability:
    def test_matches_future_on_fixtures(self, six_node, graph_supp, volterra4):
        for m in (six_node, graph_supp, volterra4):
            for x in range(m.n):
                assert boolean_reachability(m, {x}) == future(m, {x})

    def test_matches_future_on_random(self):
        rng = random.Random(17)
        for _ in range(80):
            m = random_support_matrix(rng)
            a = random_subset(rng, m.n)
            assert boolean_reachability(m, a) == future(m, a)

    def test_empty(self, six_node):
        assert boolean_reachability(six_node, set()) == frozenset()


class TestExactRank:
    def test_identity(self):
        assert exact_rank([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == 3

    def test_rank_one(self):
        assert exact_rank([[1, 1], [1, 1]]) == 1

    def test_nilpotent_square(self):
        m = [[Fraction(0), Fraction(1)], [Fraction(0), Fraction(0)]]
        sq = [[sum(m[i][k] * m[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
        assert exact_rank(sq) == 0

    def test_fractions(self):
        assert exact_rank([[Fraction(1, 3), Fraction(2, 3)], [Fraction(1, 6), Fraction(1, 3)]]) == 1

    def test_zero_matrix(self):
        assert exact_rank([[0, 0], [0, 0]]) == 0

    def test_matches_fraction_gauss_on_random(self):
        rng = random.Random(19)
        for _ in range(120):
            n = rng.randint(1, 6)
            rows = [
                [Fraction(rng.randint(-4, 4), rng.randint(1, 4)) for _ in range(n)]
                for _ in range(n)
            ]
            if rng.random() < 0.4 and n >= 2:  # plant rank deficiency
                rows[n - 1] = [x + y for x, y in zip(rows[0], rows[1 % n])]
            assert exact_rank(rows) == fraction_gauss_rank(rows)

    def test_matches_numpy_on_integer_matrices(self):
        rng = random.Random(23)
        for _ in range(60):
            n = rng.randint(1, 5)
            rows = [[rng.randint(0, 3) for _ in range(n)] for _ in range(n)]
            assert exact_rank(rows) == np.linalg.matrix_rank(np.array(rows, dtype=float))


class TestExactMultiplicity:
    def test_jordan_block(self):
        assert exact_multiplicity([[1, 1], [0, 1]], 1) == 2

    def test_not_an_eigenvalue(self):
        assert exact_multiplicity([[1, 1], [0, 1]], 5) == 0

    def test_mixed_blocks(self):
        # 2x2 Jordan block at 1 plus an isolated eigenvalue 3
        m = [[1, 1, 0], [0, 1, 0], [0, 0, 3]]
        assert exact_multiplicity(m, 3) == 1
        assert exact_multiplicity(m, 1) == 2

    def test_two_cycle_negative_eigenvalue(self):
        assert exact_multiplicity([[0, 1], [1, 0]], -1) == 1
        assert exact_multiplicity([[0, 1], [1, 0]], 1) == 1


class TestProbe:
    def test_probe_reports_but_never_asserts(self, six_node):
        summary = restriction_admissibility_probe(six_node, trials=100)
        assert summary["trials"] > 0
        assert summary["agreements"] + summary["disagreements"] == summary["trials"]

    def test_probe_on_random(self):
        rng = random.Random(29)
        for seed in range(5):
            m = random_support_matrix(rng, max_n=7)
            summary = restriction_admissibility_probe(m, trials=60, seed=seed)
            assert isinstance(summary["disagreements"], int)
