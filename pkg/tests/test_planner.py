import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from nokequal.errors import (
    BaseRuleUndefined,
    DimensionMismatch,
    NotInSpace,
    ParameterOutOfRange,
)
from nokequal.planner import (
    Path,
    SimplicialComplex,
    in_conf_complex,
    in_conf_k,
    inverse_reduce,
    plan_conf3_3,
    pullback_rule,
    reduce_to_xn,
    validate_path,
)


def test_in_conf_k():
    assert in_conf_k((0, 0, 1, 1), 3)
    assert not in_conf_k((0, 0, 0, 1), 3)
    assert in_conf_k((3, 1, 4, 1, 5), 2) is False
    assert in_conf_k((1.5, 2.5, 3.5), 2)


def test_complex_downward_closure_from_facets():
    K = SimplicialComplex.from_facets(4, [[1, 2, 3]])
    assert frozenset([1, 2]) in K.faces
    assert frozenset([4]) in K.faces
    assert frozenset([1, 2, 3, 4]) not in K.faces


def test_minimal_nonfaces_examples():
    edges = SimplicialComplex.from_facets(3, [[1, 2], [1, 3], [2, 3]])
    assert edges.minimal_nonfaces() == [frozenset([1, 2, 3])]
    full = SimplicialComplex.skeleton(4, 3)
    assert full.minimal_nonfaces() == []
    skel = SimplicialComplex.skeleton(5, 1)
    assert sorted(sorted(s) for s in skel.minimal_nonfaces()) == \
        [list(c) for c in __import__("itertools").combinations(range(1, 6), 3)]


def test_in_conf_complex():
    K = SimplicialComplex.from_facets(3, [[1, 2], [1, 3], [2, 3]])
    assert in_conf_complex((5, 5, 7), K)
    assert not in_conf_complex((5, 5, 5), K)
    with pytest.raises(DimensionMismatch):
        in_conf_complex((1, 2), K)


def test_full_simplex_accepts_everything():
    K = SimplicialComplex.skeleton(3, 2)
    assert in_conf_complex((9, 9, 9), K)


def test_skeleton_matches_k_predicate():
    rng = random.Random(0)
    K = SimplicialComplex.skeleton(5, 1)  # (k-2)-skeleton for k=3
    for _ in range(500):
        x = tuple(rng.randint(0, 3) for _ in range(5))
        assert in_conf_complex(x, K) == in_conf_k(x, 3)


def test_subcomplex_monotonicity():
    rng = random.Random(1)
    L = SimplicialComplex.skeleton(4, 1)
    K = SimplicialComplex.skeleton(4, 2)
    for _ in range(200):
        x = tuple(rng.randint(0, 2) for _ in range(4))
        if in_conf_complex(x, L):
            assert in_conf_complex(x, K)


def test_reduce_example():
    direction, scale, offset = reduce_to_xn((3, 5, 4))
    assert direction == pytest.approx((-(2 ** -0.5), 2 ** -0.5, 0.0))
    assert scale == pytest.approx(2 ** 0.5)
    assert offset == 4


def test_reduce_fixed_points():
    x = (0.6, -0.8, 0.0)
    direction, scale, offset = reduce_to_xn(x)
    assert direction == pytest.approx(x)
    assert scale == pytest.approx(1.0)
    assert offset == 0.0


def test_reduce_rejects_triple_collision():
    with pytest.raises(NotInSpace):
        reduce_to_xn((2, 2, 2, 5))


@given(st.lists(st.floats(-50, 50, allow_nan=False), min_size=3, max_size=8))
@settings(max_examples=80, deadline=None)
def test_reduce_roundtrip(coords):
    x = tuple(coords)
    if not in_conf_k(x, 3):
        return
    direction, scale, offset = reduce_to_xn(x)
    back = inverse_reduce(direction, scale, offset)
    for xi, bi in zip(x, back):
        assert abs(xi - bi) <= 1e-12 * max(1.0, abs(xi))
    assert direction[-1] == 0.0
    assert sum(d * d for d in direction) == pytest.approx(1.0)


def test_path_invariants():
    with pytest.raises(ParameterOutOfRange):
        Path(((0.0, 0.0),))
    p = Path.through((0, 0, 1), (1, 1, 0), (2, 2, 2))
    assert p.start == (0, 0, 1) and p.end == (2, 2, 2)
    assert len(p.pieces) == 2
    assert p.at(0.5) == (1, 1, 0)
    assert p.reversed().points == p.points[::-1]


def test_plan_direct_segment():
    domain, path = plan_conf3_3((0, 1, 2), (0, 2, 4))
    assert domain == 0
    assert path.points == ((0, 1, 2), (0, 2, 4))


def test_plan_detour():
    domain, path = plan_conf3_3((0, 1, 2), (2, 1, 0))
    assert domain == 1
    assert path.points[1] == (3, -3, 3)
    assert validate_path(path, 3, strict=True)


def test_plan_constant():
    domain, path = plan_conf3_3((0, 1, 2), (0, 1, 2))
    assert domain == 0
    assert validate_path(path, 3, strict=True)


def test_plan_domain_symmetric():
    rng = random.Random(5)
    for _ in range(300):
        x = tuple(rng.uniform(-4, 4) for _ in range(3))
        y = tuple(rng.uniform(-4, 4) for _ in range(3))
        assert plan_conf3_3(x, y)[0] == plan_conf3_3(y, x)[0]


def test_plan_rejects_collided_endpoint():
    with pytest.raises(NotInSpace):
        plan_conf3_3((1, 1, 1), (0, 1, 2))


def test_plan_exact_rational_boundary():
    # segment crosses the diagonal exactly at t = 1/2
    x = (Fraction(0), Fraction(1), Fraction(2))
    y = (Fraction(2), Fraction(1), Fraction(0))
    domain, path = plan_conf3_3(x, y)
    assert domain == 1
    assert validate_path(path, 3, strict=True)


def test_parallel_to_diagonal_is_direct():
    # y - x proportional to (1,1,1) can never reach the diagonal
    domain, path = plan_conf3_3((0, 1, 2), (5, 6, 7))
    assert domain == 0
    assert validate_path(path, 3, strict=True)


def test_validate_catches_midpoint_collision():
    seg = Path.through((0, 1, 2), (2, 1, 0))
    assert not validate_path(seg, 3, strict=True)
    # coarse sampling alone can also see this crossing
    assert not validate_path(seg, 3, samples=3)


def test_validate_with_complex_constraint():
    K = SimplicialComplex.from_facets(3, [[1, 2], [1, 3], [2, 3]])
    _, path = plan_conf3_3((0, 1, 2), (2, 1, 0))
    assert validate_path(path, K, strict=True)


def test_pullback_identity_instantiation():
    ident = lambda z: z
    const_h = lambda z, s: z
    base = lambda a, b: plan_conf3_3(a, b)[1]
    path = pullback_rule(ident, ident, const_h, base, (0, 1, 2), (2, 1, 0))
    assert path.start == (0, 1, 2) and path.end == (2, 1, 0)
    assert validate_path(path, 3)


def test_pullback_base_rule_undefined():
    with pytest.raises(BaseRuleUndefined):
        pullback_rule(lambda z: z, lambda z: z, lambda z, s: z,
                      lambda a, b: None, (0, 1, 2), (2, 1, 0))


def test_pullback_through_reduction():
    """Plan on 3 points by reducing scale and offset to canonical values."""

    def alpha(z):
        d, _, _ = reduce_to_xn(z)
        return d

    beta = lambda d: d

    def homotopy(z, s):
        d, scale, offset = reduce_to_xn(z)
        return inverse_reduce(d, scale + s * (1 - scale), offset * (1 - s))

    base = lambda a, b: plan_conf3_3(a, b)[1]
    rng = random.Random(11)
    for _ in range(50):
        x = tuple(rng.uniform(-3, 3) for _ in range(3))
        y = tuple(rng.uniform(-3, 3) for _ in range(3))
        path = pullback_rule(alpha, beta, homotopy, base, x, y)
        assert path.start == x and path.end == y
        assert validate_path(path, 3, samples=64)
