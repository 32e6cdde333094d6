import pytest

from kuramoto_bkk.certify import (
    ConditionViolated,
    Status,
    check_main_condition,
    initial_system,
    intersection_index,
    relevant_directions,
    restricted_support,
)
from kuramoto_bkk.kuramoto import OscillatorNetwork, build_spaces
from kuramoto_bkk.polynomial import SpanSpace, parse_polynomial, space_newton_polytope
from kuramoto_bkk.polytope import Meet, convex_hull

C3 = build_spaces(OscillatorNetwork.complete(2))


def spaces(*gens, n=2):
    return [SpanSpace.parse(g, n) for g in gens]


def test_c3_certifies():
    report = check_main_condition(C3)
    assert report.overall
    assert all(s.violations == () and s.dim == 2 for s in report.per_space)
    res = intersection_index(C3, seed=3)
    assert res.status is Status.CERTIFIED and res.value == 6 == res.interpolation_value


def test_diagonal_violation():
    sp = spaces(["1", "x1 + x2"], ["1", "x1", "x2"])
    report = check_main_condition(sp)
    assert not report.overall
    (v,) = report.per_space[0].violations
    assert v.classification is Meet.POSITIVE_DIM
    assert set(v.face_vertices) == {(0, 1), (1, 0)} and v.normal == (-1, -1)
    assert v.generator == 1 and v.intersection_dim == 1
    assert report.per_space[1].ok
    res = intersection_index(sp)
    assert res.status is Status.REFUSED and res.value is None
    assert "value" not in res.to_json()


def test_segment_space_fails_dim():
    sp = spaces(["1", "x1*x2^-1 - x2*x1^-1"], ["1", "x1", "x2"])
    report = check_main_condition(sp)
    assert report.dim_failures == [0] and not report.overall
    assert report.to_json()["perSpace"][0]["dimVerdict"] == "fail"


def test_n1_vacuous():
    sp = spaces(["1", "x1 - x1^-1"], n=1)
    report = check_main_condition(sp)
    assert report.overall and report.per_space[0].faces_checked == 0
    assert intersection_index(sp).value == 2


def test_wrong_shapes():
    with pytest.raises(ValueError):
        check_main_condition(spaces(["1", "x1"]))
    with pytest.raises(ValueError):
        check_main_condition([SpanSpace.parse(["x1"], 1), SpanSpace.parse(["x2"], 2)])


def test_report_replays_byte_identical():
    a = check_main_condition(C3).dumps()
    b = check_main_condition(build_spaces(OscillatorNetwork.complete(2))).dumps()
    assert a == b


def test_certificate_json_shape():
    doc = intersection_index(C3, seed=1).to_json()
    assert doc["status"] == "certified" and doc["value"] == 6
    audit = doc["mixedVolumeAudit"]
    assert audit["interpolationValue"] == 6 and audit["liftingSeed"] == 1
    assert sum(c["det"] for c in audit["cells"]) == 6


def test_relevant_directions():
    seg1 = convex_hull([(0, 0), (1, 0)], 2)
    seg2 = convex_hull([(0, 0), (0, 1)], 2)
    assert relevant_directions([seg1, seg2]) == [(-1, 0), (0, -1), (0, 1), (1, 0)]
    polys = [space_newton_polytope(L) for L in C3]
    dirs = relevant_directions(polys)
    assert len(dirs) == 8
    assert relevant_directions([convex_hull([(-1,), (1,)], 1)]) == [(-1,), (1,)]


def test_restricted_support_c3():
    rs = restricted_support(C3, (1, 1))
    assert [a for a, _ in rs.points[0]] == [(-1, 0)]
    assert rs.coefficients_independent()
    for v in relevant_directions([space_newton_polytope(L) for L in C3]):
        rs = restricted_support(C3, v)
        assert rs.coefficients_independent()
        assert all(1 <= c <= L.m for c, L in zip(rs.counts(), C3))


def test_restricted_support_errors_on_violation():
    sp = spaces(["1", "x1 + x2"], ["1", "x1", "x2"])
    with pytest.raises(ConditionViolated):
        restricted_support(sp, (-1, -1))
    with pytest.raises(ValueError):
        restricted_support(C3, (0, 0))


def test_initial_system_unit_flag():
    fs = [parse_polynomial("x1 + x2 + 1", 2), parse_polynomial("x1 - x2", 2)]
    init = initial_system(fs, (1, 1))
    assert init.forms == (parse_polynomial("1", 2), parse_polynomial("x1 - x2", 2))
    assert init.has_unit
    with pytest.raises(ValueError):
        initial_system(fs, (0, 0))
