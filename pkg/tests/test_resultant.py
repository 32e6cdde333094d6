import pytest

from kuramoto_bkk.certify import intersection_index
from kuramoto_bkk.kuramoto import OscillatorNetwork, build_spaces, instantiate
from kuramoto_bkk.oracle.resultant import (
    NonFiniteRootSet,
    count_torus_roots_bivariate,
    count_torus_roots_univariate,
)
from kuramoto_bkk.polynomial import parse_polynomial


def P(text, n=2):
    return parse_polynomial(text, n)


@pytest.mark.parametrize(
    "f1,f2,count",
    [
        ("x1 - 2", "x2 - 3", 1),
        ("x1^2 - 1", "x2 - x1", 2),
        ("x1*x2 - 1", "x1 + x2 - 3", 2),
        ("x1 + x2 + 1", "x1 - x2 + 1", 0),  # (-1, 0) lies off the torus
        ("x1 + 1", "x1*x2", 0),
        ("x1^2*x2 - 3", "x1^-1*x2^3 - 5/2", 7),
    ],
)
def test_bivariate_examples(f1, f2, count):
    rep = count_torus_roots_bivariate(P(f1), P(f2))
    assert rep.status == "exact" and rep.count == count


def test_kuramoto_c3_twenty_seeds():
    net = OscillatorNetwork.complete(2)
    certified = intersection_index(build_spaces(net)).value
    for seed in range(20):
        f1, f2 = instantiate(net, seed).rational
        assert count_torus_roots_bivariate(f1, f2).count == certified == 6


def test_univariate():
    assert count_torus_roots_univariate(P("x1 - x1^-1 + 1/3", 1)).count == 2
    assert count_torus_roots_univariate(P("x1^3 - x1", 1)).count == 2
    rep = count_torus_roots_univariate(P("x1^2 - 2*x1 + 1", 1))
    assert rep.count is None and rep.status == "indeterminate"


def test_non_finite():
    with pytest.raises(NonFiniteRootSet):
        count_torus_roots_bivariate(P("x1 + x2 - 1"), P("2*x1 + 2*x2 - 2"))
    with pytest.raises(NonFiniteRootSet):
        count_torus_roots_bivariate(P("x1 - 1"), P("x1^2 - 1"))
    with pytest.raises(NonFiniteRootSet):
        count_torus_roots_univariate(P("x1 - x1", 1))


def test_double_root_is_indeterminate():
    rep = count_torus_roots_bivariate(P("x2 - x1^2"), P("x2 - 2*x1 + 1"))
    assert rep.count is None and rep.status == "indeterminate"
    assert rep.diagnostics["squarefreeDefect"] == 1


def test_wrong_arity():
    with pytest.raises(ValueError):
        count_torus_roots_bivariate(P("x1", 1), P("x1", 1))
    with pytest.raises(ValueError):
        count_torus_roots_univariate(P("x1"))
