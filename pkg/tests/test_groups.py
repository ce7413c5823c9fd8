import itertools

import numpy as np
import pytest

from masa_bimodules.groups import (
    GroupError,
    all_subgroups,
    build_group,
    from_table,
    generate_subgroup,
    index,
    is_subgroup,
    left_cosets,
    read_table_file,
    small_group_isomorphic,
    subgroup,
    write_table_file,
)

SPECS = [
    "cyclic:1",
    "cyclic:4",
    "cyclic:6",
    "dihedral:3",
    "dihedral:4",
    "symmetric:3",
    "symmetric:4",
    "product:(cyclic:2,cyclic:4)",
    "product:(cyclic:2,product:(cyclic:2,cyclic:3))",
]


@pytest.mark.parametrize("spec", SPECS)
def test_group_axioms(spec):
    G = build_group(spec)
    t = G.table
    n = G.order
    for a, b, c in itertools.product(range(n), repeat=3):
        assert t[t[a, b], c] == t[a, t[b, c]]
    assert (t[0] == np.arange(n)).all() and (t[:, 0] == np.arange(n)).all()
    for a in range(n):
        assert t[a, G.inv(a)] == 0 == t[G.inv(a), a]


def test_cyclic_table():
    G = build_group("cyclic:4")
    assert G.order == 4
    for a in range(4):
        for b in range(4):
            assert G.mul(a, b) == (a + b) % 4


def test_product_z2_z4():
    G = build_group("product:(cyclic:2,cyclic:4)")
    assert G.order == 8
    assert G.is_abelian()
    assert G.labels[G.index_of((1, 3))] == (1, 3)
    assert G.mul(G.index_of((1, 3)), G.index_of((1, 2))) == G.index_of((0, 1))


def test_symmetric_nonabelian_and_orders():
    S3 = build_group("symmetric:3")
    assert S3.order == 6 and not S3.is_abelian()
    assert sorted(S3.element_order(x) for x in S3.elements()) == [1, 2, 2, 2, 3, 3]
    assert build_group("symmetric:5").order == 120
    with pytest.raises(GroupError):
        build_group("symmetric:6")


def test_dihedral_order_profile():
    D4 = build_group("dihedral:4")
    assert D4.order == 8 and not D4.is_abelian()
    assert sorted(D4.element_order(x) for x in D4.elements()) == [1, 2, 2, 2, 2, 2, 4, 4]


def test_missing_inverse_is_rejected():
    with pytest.raises(GroupError, match="no inverse"):
        from_table([[0, 1], [1, 1]])


def test_nonassociative_names_triple():
    # a loop: identity and inverses exist, associativity fails
    t = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]
    with pytest.raises(GroupError, match=r"not associative at triple \(\d+, \d+, \d+\)"):
        from_table(t)


@pytest.mark.parametrize("bad", ["cyclic:", "foo:3", "product:(cyclic:2)", "cyclic:x"])
def test_malformed_specs(bad):
    with pytest.raises(GroupError):
        build_group(bad)


def test_identity_is_moved_to_zero():
    # Z3 with the identity stored at index 2
    t = [[1, 2, 0], [2, 0, 1], [0, 1, 2]]
    G = from_table(t)
    assert G.mul(0, 1) == 1 and G.mul(2, 0) == 2
    assert G.labels[0] == 2


def test_table_file_roundtrip(tmp_path):
    G = build_group("symmetric:3")
    path = tmp_path / "s3.txt"
    write_table_file(G, path)
    H = read_table_file(path)
    assert np.array_equal(G.table, H.table)
    assert build_group(f"table:{path}") == G


def test_table_file_errors(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("2\n0 1\n1\n")
    with pytest.raises(GroupError, match=":3: expected 2 entries"):
        read_table_file(path)


def test_generate_subgroup_examples():
    Z8 = build_group("cyclic:8")
    assert generate_subgroup(Z8, {2}).elements == (0, 2, 4, 6)

    G = build_group("product:(cyclic:2,cyclic:4)")
    H1 = generate_subgroup(G, {G.index_of((0, 1))})
    assert H1.order == 4
    H2 = generate_subgroup(G, {G.index_of((0, 2)), G.index_of((1, 0))})
    assert {G.labels[x] for x in H2.elements} == {(0, 0), (0, 2), (1, 0), (1, 2)}

    with pytest.raises(GroupError):
        generate_subgroup(G, set())


@pytest.mark.parametrize("spec", SPECS[:6])
def test_generated_subgroups_are_stable_and_lagrange(spec):
    G = build_group(spec)
    rng = np.random.default_rng(1)
    for _ in range(20):
        E = set(rng.choice(G.order, size=int(rng.integers(1, 3)), replace=True).tolist())
        H = generate_subgroup(G, E)
        assert set(E) <= set(H.elements)
        assert generate_subgroup(G, H.elements).elements == H.elements
        assert G.order % H.order == 0
        assert is_subgroup(G, H.elements)


def test_left_cosets_examples():
    Z4 = build_group("cyclic:4")
    assert left_cosets(Z4, subgroup(Z4, {0, 2})).classes == ((0, 2), (1, 3))
    assert left_cosets(Z4, subgroup(Z4, range(4))).classes == ((0, 1, 2, 3),)

    G = build_group("product:(cyclic:2,cyclic:4)")
    H1 = generate_subgroup(G, {G.index_of((0, 1))})
    # oracle: enumerate gH1 for all 8 elements
    brute = {tuple(sorted(G.mul(g, h) for h in H1.elements)) for g in G.elements()}
    cp = left_cosets(G, H1)
    assert set(cp.classes) == brute
    assert len(cp.classes) == 2 and all(len(c) == 4 for c in cp.classes)


@pytest.mark.parametrize("spec", ["symmetric:3", "dihedral:4", "product:(cyclic:2,cyclic:4)"])
def test_cosets_match_pairwise_scan(spec):
    G = build_group(spec)
    for H in all_subgroups(G):
        cp = left_cosets(G, H)
        for g in G.elements():
            for h in G.elements():
                same = cp.class_of(g) == cp.class_of(h)
                assert same == (G.mul(G.inv(g), h) in H)
        assert len(cp.classes) * H.order == G.order


def test_index_examples():
    Z4 = build_group("cyclic:4")
    assert index(Z4, subgroup(Z4, range(4))) == 1
    assert index(Z4, subgroup(Z4, {0, 2})) == 2
    G = build_group("product:(cyclic:2,cyclic:4)")
    H2 = generate_subgroup(G, {G.index_of((0, 2)), G.index_of((1, 0))})
    assert index(G, H2) == 8 // 4 == len(left_cosets(G, H2).classes)


def test_left_cosets_rejects_non_subgroup():
    from masa_bimodules.groups import Subgroup

    Z4 = build_group("cyclic:4")
    with pytest.raises(GroupError):
        left_cosets(Z4, Subgroup(Z4, (0, 1)))
    with pytest.raises(GroupError):
        subgroup(Z4, {0, 1})


def test_all_subgroups_counts():
    assert len(all_subgroups(build_group("symmetric:3"))) == 6
    assert len(all_subgroups(build_group("product:(cyclic:2,cyclic:2)"))) == 5
    assert len(all_subgroups(build_group("dihedral:4"))) == 10
    assert len(all_subgroups(build_group("cyclic:12"))) == 6


def _iso_bruteforce(A, B):
    if A.order != B.order:
        return False
    for p in itertools.permutations(range(B.order)):
        if all(p[A.mul(x, y)] == B.mul(p[x], p[y]) for x in A.elements() for y in A.elements()):
            return True
    return False


def test_isomorphism_examples():
    G = build_group("product:(cyclic:2,cyclic:4)")
    H1 = generate_subgroup(G, {G.index_of((0, 1))})
    H2 = generate_subgroup(G, {G.index_of((0, 2)), G.index_of((1, 0))})
    assert not small_group_isomorphic(H1, H2)
    Z4 = build_group("cyclic:4")
    assert small_group_isomorphic(Z4, Z4)
    Z6 = build_group("cyclic:6")
    assert small_group_isomorphic(subgroup(Z6, {0, 2, 4}), build_group("cyclic:3"))
    assert _iso_bruteforce(subgroup(Z6, {0, 2, 4}).as_group(), build_group("cyclic:3"))


def test_isomorphism_matches_bruteforce_small():
    groups = [build_group(s) for s in ["cyclic:4", "product:(cyclic:2,cyclic:2)", "cyclic:6", "symmetric:3"]]
    for A in groups:
        for B in groups:
            assert small_group_isomorphic(A, B) == _iso_bruteforce(A, B)
            assert small_group_isomorphic(A, B) == small_group_isomorphic(B, A)


def test_isomorphism_order_8_and_12():
    D4 = build_group("dihedral:4")
    Z8 = build_group("cyclic:8")
    Z24 = build_group("product:(cyclic:2,cyclic:4)")
    assert small_group_isomorphic(D4, D4)
    assert not small_group_isomorphic(D4, Z24)
    assert not small_group_isomorphic(Z8, Z24)
    D6 = build_group("dihedral:6")
    assert small_group_isomorphic(D6, build_group("product:(cyclic:2,symmetric:3)"))
    assert small_group_isomorphic(build_group("cyclic:12"), build_group("product:(cyclic:3,cyclic:4)"))
    assert not small_group_isomorphic(build_group("cyclic:12"), build_group("product:(cyclic:2,cyclic:6)"))


def test_isomorphism_size_bound():
    with pytest.raises(GroupError, match="up to 12"):
        small_group_isomorphic(build_group("symmetric:4"), build_group("symmetric:4"))
