import random

import pytest

from matom import (
    InputError,
    NonnegativeMatrix,
    atom_order,
    atoms,
    future,
    height,
    is_antichain,
    is_convex,
    is_irreducible,
    longest_chain,
    past,
    power_atoms,
    restrict,
    subset_heights,
    support_graph,
    verify_atom_characterizations,
)

from randgen import random_subset, random_support_matrix


def atom_sets(partition):
    return sorted(sorted(a) for a in partition.atoms)


class TestPartition:
    def test_six_node(self, six_node):
        assert atom_sets(atoms(six_node)) == [[0, 1, 2], [3], [4], [5]]

    def test_two_cycle_and_its_square(self, two_cycle):
        assert atom_sets(atoms(two_cycle)) == [[0, 1]]
        assert atom_sets(power_atoms(two_cycle, 2)) == [[0], [1]]

    def test_zero_matrix_singletons(self):
        part = atoms(NonnegativeMatrix([[0] * 3] * 3))
        assert atom_sets(part) == [[0], [1], [2]]

    def test_atom_of_is_consistent(self):
        rng = random.Random(3)
        for _ in range(50):
            part = atoms(random_support_matrix(rng))
            for idx, a in enumerate(part.atoms):
                assert all(part.atom_of[x] == idx for x in a)

    def test_canonical_order_feeders_first(self, six_node):
        part = atoms(six_node)
        assert sorted(part.atoms[0]) == [0, 1, 2]
        assert sorted(part.atoms[-1]) == [5]

    def test_atoms_are_convex_and_irreducible(self):
        rng = random.Random(5)
        for _ in range(60):
            m = random_support_matrix(rng)
            for a in atoms(m).atoms:
                assert is_convex(m, a)
                assert is_irreducible(m, a)

    def test_index_of(self, six_node):
        part = atoms(six_node)
        assert part.index_of({0, 1, 2}) == 0
        with pytest.raises(InputError):
            part.index_of({0, 1})


class TestOrder:
    def test_six_node_poset(self, six_node):
        poset = atom_order(six_node)
        part = poset.partition
        block, a4, a5, sink = (part.index_of(s) for s in ({0, 1, 2}, {3}, {4}, {5}))
        assert poset.leq(sink, a4) and poset.leq(sink, a5)
        assert poset.leq(a4, block) and poset.leq(a5, block)
        assert not poset.comparable(a4, a5)
        assert set(poset.covers) == {(block, a4), (block, a5), (a4, sink), (a5, sink)}

    def test_single_atom_trivial_poset(self, two_cycle):
        poset = atom_order(two_cycle)
        assert poset.covers == ()
        assert poset.below == (frozenset({0}),)

    def test_graph_supp_feeder_is_above(self, graph_supp):
        poset = atom_order(graph_supp)
        feeder = poset.partition.index_of({0})
        fed = poset.partition.index_of({1})
        assert poset.leq(fed, feeder)
        assert not poset.leq(feeder, fed)

    def test_transitive_reduction_drops_implied_edges(self):
        # 0 -> 1 -> 2 plus the shortcut 0 -> 2: only the chain edges remain
        m = NonnegativeMatrix([[0, 0, 0], [1, 0, 0], [1, 1, 0]])
        poset = atom_order(m)
        part = poset.partition
        a, b, c = (part.index_of({k}) for k in (0, 1, 2))
        assert set(poset.covers) == {(a, b), (b, c)}

    def test_order_axioms_on_random_instances(self):
        rng = random.Random(11)
        for _ in range(40):
            m = random_support_matrix(rng, max_n=7)
            poset = atom_order(m)
            ids = range(len(poset.partition))
            for a in ids:
                assert poset.leq(a, a)
                for b in ids:
                    if poset.leq(a, b) and poset.leq(b, a):
                        assert a == b
                    for c in ids:
                        if poset.leq(a, b) and poset.leq(b, c):
                            assert poset.leq(a, c)

    def test_order_matches_set_futures(self):
        rng = random.Random(13)
        for _ in range(40):
            m = random_support_matrix(rng, max_n=7)
            poset = atom_order(m)
            part = poset.partition
            for a in range(len(part)):
                fut = future(m, part.atoms[a])
                for b in range(len(part)):
                    assert poset.leq(b, a) == (part.atoms[b] <= fut)


class TestHeights:
    def test_pair_chain(self, jordan_pair):
        poset = atom_order(jordan_pair)
        part = poset.partition
        top = part.index_of({1})
        bottom = part.index_of({0})
        ids = [top, bottom]
        assert height(poset, ids, top) == 2
        assert height(poset, ids, bottom) == 1
        assert longest_chain(poset, ids) == 1

    def test_singleton_subset(self, six_node):
        poset = atom_order(six_node)
        assert height(poset, [0], 0) == 1

    def test_member_required(self, six_node):
        poset = atom_order(six_node)
        with pytest.raises(InputError):
            height(poset, [0], 1)

    def test_radius_tree_heights_at_top_radius(self, radius_tree):
        # the single atom of radius 3 forms the whole critical subset
        poset = atom_order(radius_tree)
        crit = [poset.partition.index_of({1})]
        assert subset_heights(poset, crit) == {crit[0]: 1}

    def test_antichain_check(self, six_node):
        poset = atom_order(six_node)
        part = poset.partition
        assert is_antichain(poset, [part.index_of({3}), part.index_of({4})])
        assert not is_antichain(poset, [part.index_of({3}), part.index_of({5})])

    def test_heights_respect_subset(self):
        # chain of three atoms; dropping the middle one shortens the chain
        m = NonnegativeMatrix([[1, 0, 0], [1, 1, 0], [0, 1, 1]])
        poset = atom_order(m)
        part = poset.partition
        a, b, c = (part.index_of({k}) for k in (0, 1, 2))
        assert subset_heights(poset, [a, b, c]) == {a: 3, b: 2, c: 1}
        assert subset_heights(poset, [a, c]) == {a: 2, c: 1}


class TestCharacterizations:
    def test_six_node_all_four_families(self, six_node):
        report = verify_atom_characterizations(six_node)
        assert report.agree
        assert sorted(map(sorted, report.components)) == [[0, 1, 2], [3], [4], [5]]

    def test_one_by_one(self):
        report = verify_atom_characterizations(NonnegativeMatrix([[0]]))
        assert report.agree
        assert report.components == (frozenset({0}),)

    def test_random_instances(self):
        rng = random.Random(17)
        for _ in range(50):
            m = random_support_matrix(rng, n=rng.randint(1, 10))
            assert verify_atom_characterizations(m).agree

    def test_cap_enforced(self):
        m = NonnegativeMatrix([[0.0] * 17 for _ in range(17)])
        with pytest.raises(InputError, match="n <= 16"):
            verify_atom_characterizations(m)


class TestAtomInteractions:
    def test_admissible_irreducible_dichotomy(self):
        # admissible A and irreducible B: disjoint or B inside A
        rng = random.Random(19)
        for _ in range(60):
            m = random_support_matrix(rng, max_n=6)
            part = atoms(m)
            admissible = frozenset().union(
                *(a for a in part.atoms if rng.random() < 0.5), frozenset()
            )
            for b in part.atoms:  # atoms are irreducible
                assert not (admissible & b) or b <= admissible

    def test_irreducible_closure_is_atom(self):
        rng = random.Random(23)
        for _ in range(60):
            m = random_support_matrix(rng, max_n=7)
            part = atoms(m)
            for a in part.atoms:
                seeds = [x for x in a if rng.random() < 0.7] or [min(a)]
                if is_irreducible(m, seeds):
                    closure = future(m, seeds) & past(m, seeds)
                    assert closure in set(part.atoms)

    def test_restriction_keeps_atoms(self):
        rng = random.Random(29)
        for _ in range(60):
            m = random_support_matrix(rng, max_n=7)
            part = atoms(m)
            omega = random_subset(rng, m.n)
            if not omega:
                continue
            sub = restrict(support_graph(m), omega)
            sub_atoms = set(atoms(sub).atoms)
            for a in part.atoms:
                if a <= omega:
                    assert a in sub_atoms

    def test_admissible_restriction_round_trip(self):
        # with an admissible restriction set, the restricted atoms inside it
        # coincide with the original atoms
        rng = random.Random(31)
        for _ in range(60):
            m = random_support_matrix(rng, max_n=7)
            part = atoms(m)
            chosen = [a for a in part.atoms if rng.random() < 0.5]
            if not chosen:
                continue
            omega = frozenset().union(*chosen)
            sub_atoms = {a for a in atoms(restrict(support_graph(m), omega)).atoms if a <= omega}
            assert sub_atoms == set(chosen)

    def test_power_atoms_inside_base_atoms(self):
        rng = random.Random(37)
        for _ in range(60):
            m = random_support_matrix(rng, max_n=7)
            part = atoms(m)
            for n in (2, 3, 4):
                for a in power_atoms(m, n).atoms:
                    assert any(a <= b for b in part.atoms)
