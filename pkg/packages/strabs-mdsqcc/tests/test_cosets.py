import pytest

from strabs.mdsqcc.cosets import (
    DefiningSet,
    Family,
    context,
    cyclotomic_coset,
    defining_set,
    defining_set_family_I,
    defining_set_family_II,
    family_ii_m,
    full_theta,
    is_dual_containing,
    mult_order,
    negate_q_image,
    theta_decomposition,
)
from strabs.mdsqcc.errors import ConsistencyError, PreconditionError


def test_mult_order():
    assert mult_order(25, 156) == 2
    assert mult_order(529, 1272) == 2
    assert mult_order(3, 1) == 1
    with pytest.raises(PreconditionError, match="no order"):
        mult_order(2, 4)


def test_family_i_context(ctx5):
    assert (ctx5.n, ctx5.r, ctx5.modulus, ctx5.s) == (26, 6, 156, 13)
    assert len(ctx5.theta) == 26
    assert ctx5.position(19) == 3
    with pytest.raises(PreconditionError, match="not in theta"):
        ctx5.position(2)


def test_family_ii_context(ctx23):
    assert (ctx23.n, ctx23.r, ctx23.modulus, ctx23.s) == (53, 24, 1272, 265)
    assert ctx23.half == 26


def test_family_ii_needs_ten_dividing_q_squared_plus_one():
    assert family_ii_m(23) == 2
    assert family_ii_m(37) == 3
    with pytest.raises(PreconditionError, match="10m"):
        family_ii_m(11)
    with pytest.raises(PreconditionError):
        context(Family.II, 7)


def test_even_q_is_rejected():
    with pytest.raises(PreconditionError, match="odd"):
        context("I", 4)


def test_cyclotomic_cosets(ctx5):
    assert cyclotomic_coset(7, ctx5) == (7, 19)
    assert cyclotomic_coset(13, ctx5) == (13,)
    assert cyclotomic_coset(13 + 156, ctx5) == (13,)


def test_family_i_defining_set(ctx5):
    Z = defining_set_family_I(ctx5, 2)
    assert Z.exponents == (1, 7, 13, 19, 25)
    assert Z.representatives == (13, 7, 1)
    assert len(Z) == 5
    assert 19 in Z and 31 not in Z
    with pytest.raises(PreconditionError, match="delta=3"):
        defining_set_family_I(ctx5, 3)


def test_family_ii_defining_set_sizes(ctx23):
    for t in range(ctx23.half):
        assert len(defining_set_family_II(ctx23, t)) == 2 * (t + 1)
    with pytest.raises(PreconditionError):
        defining_set_family_II(ctx23, ctx23.half)


def test_defining_set_family_must_match_context(ctx5, ctx23):
    with pytest.raises(PreconditionError):
        defining_set_family_II(ctx5, 1)
    with pytest.raises(PreconditionError):
        defining_set_family_I(ctx23, 1)


def test_defining_set_must_be_closed_and_inside_theta(ctx5):
    with pytest.raises(PreconditionError, match="not closed"):
        DefiningSet(ctx5, ((7,),), (7,))
    with pytest.raises(PreconditionError, match="outside theta"):
        DefiningSet.from_representatives(ctx5, [2])


def test_negated_image_and_dual_containment(ctx5):
    Z = defining_set(ctx5, 2)
    assert negate_q_image(Z) == {151, 121, 91, 61, 31}
    assert is_dual_containing(Z)
    only_s = DefiningSet.from_representatives(ctx5, [13])
    assert negate_q_image(only_s) == {91}
    both = DefiningSet.from_representatives(ctx5, [13, 91])
    assert not is_dual_containing(both)
    assert not is_dual_containing(full_theta(ctx5))


@pytest.mark.parametrize(
    ("family", "q", "n", "singletons", "pairs"),
    [
        ("I", 3, 10, 2, 4),
        ("I", 5, 26, 2, 12),
        ("I", 7, 50, 2, 24),
        ("II", 23, 53, 1, 26),
        ("II", 37, 137, 1, 68),
    ],
)
def test_theta_decomposition_shape(family, q, n, singletons, pairs):
    decomposition = theta_decomposition(context(family, q))
    assert len(decomposition.singletons) == singletons
    assert len(decomposition.pairs) == pairs
    assert decomposition.as_dict()["size"] == n


def test_theta_decomposition_starts_with_s(ctx5):
    decomposition = theta_decomposition(ctx5)
    assert decomposition.cosets[0] == (13,)
    assert sorted(c[0] for c in decomposition.singletons) == [13, 91]


def test_union_of_defining_sets(ctx5):
    a = DefiningSet.from_representatives(ctx5, [13])
    b = DefiningSet.from_representatives(ctx5, [7])
    assert a.union(b).exponents == (7, 13, 19)
    with pytest.raises(ConsistencyError, match="overlap"):
        a.union(a)
