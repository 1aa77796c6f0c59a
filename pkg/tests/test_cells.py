"""Lowest-cell geometry: membership, cells, factorization, witness pairs."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import make_config, small_configs
from lowcell import CellAtlas, CellGeometry, DomainError, Group, HeckeAlgebra, KLTable
from lowcell.cells import cell_label, frame_label


def geometry_for(config):
    return CellGeometry(Group(config))


def split_through_top(geom, w, radius):
    """Membership recheck: solve w = x . w_J . y for y instead of walking prefixes."""
    group = geom.group
    for _j, wj in geom.tops:
        if wj.length > w.length:
            continue
        for x in group.ball(radius).elements:
            if x.length + wj.length > w.length:
                continue
            xwj = group.multiply(x, wj)
            if xwj.length != x.length + wj.length:
                continue
            y = group.multiply(group.inverse(xwj), w)
            if xwj.length + y.length == w.length:
                return True
    return False


@given(small_configs, st.data())
def test_membership_against_solved_splits(config, data):
    geom = geometry_for(config)
    ball = geom.group.ball(4)
    w = data.draw(st.sampled_from(ball.elements))
    assert geom.in_lambda(w) == split_through_top(geom, w, 4)


@given(small_configs, st.data())
def test_membership_is_inverse_stable(config, data):
    geom = geometry_for(config)
    ball = geom.group.ball(4)
    w = data.draw(st.sampled_from(ball.elements))
    assert geom.in_lambda(w) == geom.in_lambda(geom.group.inverse(w))


def test_frames_and_bound_table():
    cases = [
        ((None, 2, 2), (1, 2, 1), 3, {"st"}),
        ((None, 2, 2), (1, 1, 1), 2, {"st", "rt"}),
        ((None, 3, 2), (1, 1, 1), 3, {"st"}),
        ((5, 4, 2), (1, 1, 2), 6, {"st"}),
        ((None, None, None), (2, 2, 1), 2, {"r", "s"}),
        ((3, 3, 3), (1, 1, 1), 3, {"rs", "st", "rt"}),
    ]
    for orders, weights, bound, labels in cases:
        geom = geometry_for(make_config(*orders, weights))
        assert geom.bound == bound
        assert {frame_label(j) for j, _ in geom.tops} == labels
        for j, wj in geom.tops:
            assert wj.weight == bound
            assert set(wj.word) == set(j)


@given(small_configs, st.data())
def test_left_cell_id_is_definitional(config, data):
    geom = geometry_for(config)
    group = geom.group
    ball = group.ball(4)
    members = geom.lambda_members(ball)
    if not members:
        return
    w = data.draw(st.sampled_from(members))
    j, y = geom.left_cell_id(w)
    # w = x . w_J . y additive with x in B_J, and y in U_J
    assert geom.u_member(j, y)
    wj = geom.frames[j]
    wjy = group.multiply(wj, y)
    x = group.multiply(w, group.inverse(wjy))
    assert group.multiply(x, wjy) == w
    assert x.length + wj.length + y.length == w.length
    assert geom.b_member(j, x)


@given(small_configs, st.data())
def test_right_cell_mirrors_left(config, data):
    geom = geometry_for(config)
    group = geom.group
    members = geom.lambda_members(group.ball(4))
    if not members:
        return
    w = data.draw(st.sampled_from(members))
    x, j = geom.right_cell_id(w)
    # w = x . w_J . u additive with u in B_J^-1
    xwj = group.multiply(x, geom.frames[j])
    assert xwj.length == x.length + geom.frames[j].length
    u = group.multiply(group.inverse(xwj), w)
    assert xwj.length + u.length == w.length
    assert not (u.left_descents & j)


@given(small_configs, st.data())
def test_factorization_roundtrip(config, data):
    geom = geometry_for(config)
    group = geom.group
    members = geom.lambda_members(group.ball(4))
    if not members:
        return
    w = data.draw(st.sampled_from(members))
    x, p, y = geom.lemma_factorize(w)
    assert group.multiply(group.multiply(x, p), y) == w
    assert x.length + p.length + y.length == w.length
    prof = geom.profile(p)
    assert prof is not None
    j, jp = prof
    assert geom.u_member(j, group.inverse(x))
    assert geom.u_member(jp, y)


@given(small_configs, st.data())
def test_witness_pair_attains_bound(config, data):
    geom = geometry_for(config)
    group = geom.group
    members = [w for w in geom.lambda_members(group.ball(3))]
    if not members:
        return
    w = data.draw(st.sampled_from(members))
    u1, u2 = geom.witness_pair(w)
    assert group.multiply(u1, u2).length <= u1.length + u2.length
    alg = HeckeAlgebra(group.ball(u1.length + u2.length))
    assert alg.f_poly(u1, u2, w).coeff(geom.bound) != 0


def test_witness_outside_cell_is_rejected():
    geom = geometry_for(make_config(None, 2, 2, (1, 2, 1)))
    r = geom.group.element("r")
    assert not geom.in_lambda(r)
    with pytest.raises(DomainError):
        geom.lemma_factorize(r)
    with pytest.raises(DomainError):
        geom.left_cell_id(r)


def test_profile_cases():
    geom = geometry_for(make_config(None, 2, 2, (1, 2, 1)))
    group = geom.group
    assert geom.profile(group.identity) is None
    assert geom.profile(group.element("r")) is None
    st_el = group.element("st")
    assert geom.profile(st_el) == (frozenset({1, 2}), frozenset({1, 2}))
    # rs has descent sets {r} and {s}, neither a frame
    assert geom.profile(group.element("rs")) is None
    # srst is a core element: both descent sets are the frame st
    assert geom.profile(group.element("srst")) == (frozenset({1, 2}), frozenset({1, 2}))


def test_expected_counts():
    cases = [
        ((2, 2, 2), (1, 2, 3), ("finite", 1)),
        ((3, 3, 3), (1, 1, 1), ("finite", 6)),
        ((None, 2, 2), (1, 2, 1), ("finite", 2)),
        ((None, 3, 2), (1, 1, 1), ("infinite", None)),
        ((None, None, None), (1, 1, 1), ("finite", 3)),
        ((None, None, None), (2, 2, 1), ("finite", 4)),
        ((None, None, 2), (1, 2, 1), ("finite", 4)),
        ((None, None, 2), (1, 1, 1), ("infinite", None)),
    ]
    for orders, weights, expected in cases:
        geom = geometry_for(make_config(*orders, weights))
        assert geom.expected_left_cell_count() == expected, (orders, weights)


def test_cell_census_stabilizes():
    geom = geometry_for(make_config(None, 2, 2, (1, 2, 1)))
    ball = geom.group.ball(7)
    profile = geom.cell_count_profile(ball, range(2, 8))
    counts = [n for _, n in profile]
    assert counts == sorted(counts)
    assert counts[-3:] == [2, 2, 2]
    cells = geom.enumerate_left_cells(ball)
    assert sorted(cell_label(cid) for cid in cells) == ["st:", "st:r"]


def test_cells_partition_members():
    geom = geometry_for(make_config(3, 3, 3, (1, 1, 1)))
    ball = geom.group.ball(5)
    members = geom.lambda_members(ball)
    cells = geom.enumerate_left_cells(ball)
    seen = [w for _, ws in cells.items() for w in ws]
    assert sorted(seen, key=lambda w: w.sort_key()) == members
    assert len(set(seen)) == len(seen)


def test_parabolic_tops():
    geom = geometry_for(make_config(5, 4, 2, (1, 1, 2)))
    group = geom.group
    n_i, tops = geom.parabolic_tops(frozenset({0, 1}))
    assert n_i == 5 and tops == [(frozenset({0, 1}), group.longest_element((0, 1)))]
    n_i, tops = geom.parabolic_tops(frozenset({2}))
    assert n_i == 2 and tops == [(frozenset({2}), group.generators[2])]
    n_i, tops = geom.parabolic_tops(frozenset())
    assert (n_i, tops) == (0, [])


def test_atlas_shape_and_determinism():
    config = make_config(None, 2, 2, (1, 2, 1))
    group = Group(config)
    geom = CellGeometry(group)
    ball = group.ball(6)
    kl = KLTable(ball)
    atlas = CellAtlas.build(geom, ball, kl)
    again = CellAtlas.build(CellGeometry(Group(config)), Group(config).ball(6),
                            KLTable(Group(config).ball(6)))
    assert atlas.to_json() == again.to_json()
    d = atlas.to_dict()
    assert d["bound"] == 3
    assert {c["id"] for c in d["cells"]} == {"st:", "st:r"}
    assert {c["distinguished"] for c in d["cells"]} == {"st", "rsrt"}
    assert set(d["d_set"]) == {"st", "rsrt"}
    assert set(d["members"]) == set(d["left_ids"])
    for w, (dlt, n) in atlas.delta:
        assert dlt >= 0 and n != 0
        assert (dlt == atlas.bound) == (w.letters() in d["d_set"])
