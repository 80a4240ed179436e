"""Tests for the finite algebra tables and graded module operations."""

import pytest

from glr44 import steenrod as sd


def test_a1_closure():
    a1 = sd.algebra("A1")
    assert a1.dim == 8
    assert a1.top_degree == 6
    dims = [len(a1.basis_of_degree(d)) for d in range(7)]
    assert dims == [1, 1, 1, 2, 1, 1, 1]
    # Adem identity inside the table: Sq2 Sq2 = Sq1 Sq2 Sq1.
    sq1, sq2 = a1.index("Sq1"), a1.index("Sq2")
    lhs = a1.product(sq2, sq2)
    rhs = a1.product_sets(a1.product(sq1, sq2), {sq1})
    assert lhs == rhs != frozenset()


def test_e1_closure():
    e1 = sd.algebra("E1")
    assert e1.dim == 4
    assert sorted(e1.degrees) == [0, 1, 3, 4]
    q0, q1 = e1.index("Q0"), e1.index("Q1")
    assert e1.product(q0, q0) == frozenset()
    assert e1.product(q1, q1) == frozenset()
    assert e1.product(q0, q1) == e1.product(q1, q0) != frozenset()


def test_e0_closure():
    assert sd.algebra("E0").dim == 2


def test_algebra_associativity():
    for name in ("A1", "E1"):
        alg = sd.algebra(name)
        n = alg.dim
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    left = alg.product_sets(alg.product(i, j), {k})
                    right = alg.product_sets({i}, alg.product(j, k))
                    assert left == right


def test_point_bow_sb_shapes():
    pt = sd.module_point()
    assert pt.dim(0) == 1 and pt.total_dim() == 1
    assert pt.action("Sq2", 0).nrows == 0

    mb = sd.module_bow()
    assert [mb.dim(d) for d in range(3)] == [1, 0, 1]
    assert mb.action("Sq2", 0).rows == (1,)
    assert sd.verify_module(mb) == []

    msb = sd.module_sb()
    assert [msb.dim(d) for d in range(5)] == [1, 0, 2, 0, 1]
    assert sd.verify_module(msb) == []


def test_verify_rejects_corrupted_sb():
    a1 = sd.algebra("A1")
    with pytest.raises(ValueError):
        # Sq2 d20 = 0 while Sq2 d0 = d20 + d21, Sq2 d21 = d4 breaks the relation.
        sd.make_module(
            a1,
            {0: ("d0",), 2: ("d20", "d21"), 4: ("d4",)},
            {"Sq2": {0: [[1], [1]], 2: [[0, 1]]}},
        )


def test_suspend_inverse():
    mb = sd.module_bow()
    again = sd.suspend(sd.suspend(mb, 1), -1)
    assert again.degrees == mb.degrees
    assert sd.suspend(sd.module_point(), 3).dim(3) == 1


def test_direct_sum_dims():
    mb = sd.module_bow()
    s = sd.direct_sum([mb, sd.suspend(mb, 2)])
    assert [s.dim(d) for d in range(5)] == [1, 0, 2, 0, 1]
    assert sd.verify_module(s) == []


def test_tensor_unit():
    pt = sd.module_point()
    mb = sd.module_bow()
    t = sd.tensor(pt, mb)
    assert [t.dim(d) for d in range(3)] == [1, 0, 1]
    assert sd.verify_module(t) == []
    t2 = sd.tensor(sd.suspend(pt, 1), mb)
    assert [t2.dim(d) for d in range(4)] == [0, 1, 0, 1]


def test_tensor_cartan_two_exterior_classes():
    # Two degree-1 classes with trivial action: Sq2(x0 x1) = 0 by Cartan.
    a1 = sd.algebra("A1")
    x = sd.GradedF2Module(a1, {1: ("x",)}, {})
    t = sd.tensor(x, x)
    assert t.dim(2) == 1
    assert t.action("Sq2", 2).is_zero()
    assert t.action("Sq1", 2).is_zero()


def test_tensor_bow_bow_verifies():
    mb = sd.module_bow()
    t = sd.tensor(mb, mb)
    assert sd.verify_module(t) == []
    assert [t.dim(d) for d in range(5)] == [1, 0, 2, 0, 1]
    # Sq2(w0|w0) = w2|w0 + w0|w2 (Cartan, middle Sq1 terms vanish).
    mat = t.action("Sq2", 0)
    assert mat.rows == (1, 1)


def test_tensor_associative_dims():
    mb = sd.module_bow()
    t1 = sd.tensor(sd.tensor(mb, mb), mb)
    t2 = sd.tensor(mb, sd.tensor(mb, mb))
    for d in range(7):
        assert t1.dim(d) == t2.dim(d)
    for g in ("Sq1", "Sq2"):
        for d in range(5):
            assert t1.action(g, d).rank() == t2.action(g, d).rank()


def test_restrict_point_and_bow():
    pt_e1 = sd.restrict_to_E1(sd.module_point())
    assert pt_e1.algebra.name == "E1"
    assert pt_e1.dim(0) == 1

    mb_e1 = sd.restrict_to_E1(sd.module_bow())
    # Q1 w0 = Sq1 Sq2 w0 + Sq2 Sq1 w0 = Sq1 w2 = 0: trivial action.
    assert mb_e1.action("Q0", 0).is_zero()
    assert mb_e1.action("Q1", 0).is_zero()
    assert sd.verify_module(mb_e1) == []


def test_restrict_sb_trivial():
    msb_e1 = sd.restrict_to_E1(sd.module_sb())
    for d in (0, 2):
        assert msb_e1.action("Q0", d).is_zero()
        assert msb_e1.action("Q1", d).is_zero()


def test_restrict_commutes_with_suspend_and_sum():
    mb = sd.module_bow()
    lhs = sd.restrict_to_E1(sd.suspend(mb, 3))
    rhs = sd.suspend(sd.restrict_to_E1(mb), 3)
    assert lhs.degrees == rhs.degrees
    for g in ("Q0", "Q1"):
        for d in lhs.degrees:
            assert lhs.action(g, d).rows == rhs.action(g, d).rows
    lhs2 = sd.restrict_to_E1(sd.direct_sum([mb, sd.module_sb()]))
    rhs2 = sd.direct_sum([sd.restrict_to_E1(mb), sd.restrict_to_E1(sd.module_sb())])
    assert lhs2.degrees == rhs2.degrees
    for g in ("Q0", "Q1"):
        for d in lhs2.degrees:
            assert lhs2.action(g, d).rows == rhs2.action(g, d).rows


def test_sq1_squares_to_zero_everywhere():
    for mod in (sd.module_bow(), sd.module_sb(), sd.tensor(sd.module_bow(), sd.module_sb())):
        for d in mod.degrees:
            comp = mod.action("Sq1", d + 1).mul(mod.action("Sq1", d))
            assert comp.is_zero()


def test_serialization_roundtrip():
    for mod in (sd.module_point(), sd.module_bow(), sd.module_sb(),
                sd.tensor(sd.module_bow(), sd.module_bow())):
        text = sd.module_to_text(mod)
        back = sd.module_from_text(text)
        assert back.degrees == mod.degrees
        assert back.top == mod.top
        for g in mod.algebra.generators:
            for d in mod.degrees:
                assert back.action(g, d).rows == mod.action(g, d).rows
