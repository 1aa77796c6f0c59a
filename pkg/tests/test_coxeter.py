"""Group layer: word problem, lengths, descents, Bruhat order, balls.

Every structural fact is checked against the reflection-representation
oracle in helpers.py, which shares no code with the library's rewriting.
"""

import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

import helpers
from helpers import configs, make_config, oracle_for, small_configs, words
from lowcell import (
    ConfigError,
    DomainError,
    Group,
    GroupConfig,
    NodeCapExceeded,
    OutOfBallError,
)
from lowcell.coxeter import parse_word, shortlex_key, spell_word


@given(small_configs, words, words)
def test_word_problem_matches_reflection_representation(config, w1, w2):
    group = Group(config)
    orc = oracle_for(config)
    assert (group.element(w1) == group.element(w2)) == orc.equal(w1, w2)


@given(configs, words)
def test_canonical_word_is_shortlex_least(config, w):
    assert Group(config).element(w).word == oracle_for(config).canonical(w)


@given(configs, words)
def test_length_and_weight(config, w):
    group = Group(config)
    el = group.element(w)
    assert el.length == oracle_for(config).length(w)
    assert el.length == len(el.word)
    assert el.weight == sum(config.weight(g) for g in el.word)


@given(configs, words)
def test_descents(config, w):
    el = Group(config).element(w)
    orc = oracle_for(config)
    assert el.left_descents == orc.left_descents(w)
    assert el.right_descents == orc.right_descents(w)


@given(configs, words, words)
def test_multiplication_is_concatenation(config, w1, w2):
    group = Group(config)
    x, y = group.element(w1), group.element(w2)
    assert group.multiply(x, y) == group.element(w1 + w2)


@given(configs, words)
def test_inverse(config, w):
    group = Group(config)
    el = group.element(w)
    inv = group.inverse(el)
    assert group.multiply(el, inv) == group.identity
    assert inv.length == el.length
    assert group.inverse(inv) == el


@given(small_configs, st.data())
def test_bruhat_order_is_subword_order(config, data):
    group = Group(config)
    orc = oracle_for(config)
    ball = group.ball(4)
    x = data.draw(st.sampled_from(ball.elements))
    y = data.draw(st.sampled_from(ball.elements))
    assert group.bruhat_leq(x, y) == orc.bruhat_leq(x.word, y.word)


@given(configs, words)
def test_bruhat_lower_set(config, w):
    group = Group(config)
    el = group.element(w)
    lower = group.bruhat_lower(el)
    assert len(set(lower)) == len(lower)
    assert group.identity in lower and el in lower
    assert all(group.bruhat_leq(x, el) for x in lower)


@given(configs, st.integers(min_value=0, max_value=4))
def test_ball_matches_oracle_enumeration(config, radius):
    ball = Group(config).ball(radius)
    orc = oracle_for(config)
    assert len(ball) == len(orc.ball_words(radius))
    assert [w.word for w in ball.elements] == sorted(
        (w.word for w in ball.elements), key=lambda t: (len(t), t)
    )


@given(configs, st.data())
def test_ball_edges(config, data):
    group = Group(config)
    ball = group.ball(4)
    w = data.draw(st.sampled_from(ball.elements))
    g = data.draw(st.integers(min_value=0, max_value=2))
    right = ball.right(w, g)
    expected = group.multiply_gen(w, g)
    assert right == (expected if expected.length <= 4 else None)
    left = ball.left(g, w)
    lexp = group.multiply(group.generator(g), w)
    assert left == (lexp if lexp.length <= 4 else None)


@given(configs, words)
def test_prefix_decompositions(config, w):
    group = Group(config)
    el = group.element(w)
    decs = group.prefix_decompositions(el)
    assert len(decs) == len(set(decs))
    for u, v in decs:
        assert u.length + v.length == el.length
        assert group.multiply(u, v) == el
    # every reduced-word split appears: count prefixes of one reduced word
    seen = {u for u, _ in decs}
    for k in range(el.length + 1):
        assert group.element(el.word[:k]) in seen


def test_dihedral_relations():
    config = make_config(4, 2, 3, (2, 1, 2))
    group = Group(config)
    r, s, t = group.generators
    assert group.element("rsrs") == group.element("srsr")
    assert group.element("rtr") == group.element("trt")
    assert group.element("stst") == group.element("e")
    assert group.element((0, 0)) == group.identity


def test_longest_elements_of_parabolics():
    group = Group(make_config(5, 4, 2, (1, 1, 2)))
    w_sr = group.longest_element((0, 1))
    assert w_sr.length == 5 and w_sr.word == (0, 1, 0, 1, 0)
    w_st = group.longest_element((1, 2))
    assert w_st.length == 4 and w_st.weight == 6
    w_rt = group.longest_element((0, 2))
    assert w_rt.weight == 3
    with pytest.raises(DomainError):
        Group(make_config(None, 2, 2)).longest_element((0, 1))


@pytest.mark.parametrize(
    "config, kind, bound, tops",
    [
        (make_config(None, 2, 2, (1, 2, 1)), "other", 3, {"st"}),
        (make_config(None, 2, 2, (1, 1, 1)), "other", 2, {"st", "rt"}),
        (make_config(None, 3, 2, (1, 1, 1)), "other", 3, {"sts"}),
        (make_config(3, 3, 3, (1, 1, 1)), "affine", 3, {"rsr", "sts", "rtr"}),
        (make_config(5, 4, 2, (1, 1, 2)), "other", 6, {"stst"}),
        (make_config(7, 3, 2, (1, 1, 1)), "other", 7, {"rsrsrsr"}),
        (make_config(None, None, None, (2, 2, 1)), "other", 2, {"r", "s"}),
        (make_config(2, 2, 2, (1, 2, 3)), "finite", 6, {"rst"}),
    ],
)
def test_classification_bound_and_frames(config, kind, bound, tops):
    report = Group(config).classification()
    assert report.kind == kind
    assert report.bound == bound
    assert {w.letters() for w in report.top} == tops


def test_finite_group_order():
    report = Group(make_config(2, 3, 3, (1, 1, 1))).classification()
    assert report.kind == "finite"
    assert report.group_order == 24
    report2 = Group(make_config(2, 2, 2)).classification()
    assert report2.group_order == 8
    # w0_order is the affine-row datum; (3,3,3) quotients to the order-6 Weyl group
    affine = Group(make_config(3, 3, 3)).classification()
    assert affine.w0_order == 6 and affine.group_order is None


def test_config_validation():
    with pytest.raises(ConfigError):
        GroupConfig(3, 2, 2, 1, 2, 1)  # odd bond, unequal weights
    with pytest.raises(ConfigError):
        GroupConfig(1, 2, 2, 1, 1, 1)
    with pytest.raises(ConfigError):
        GroupConfig(2, 2, 2, 0, 1, 1)
    with pytest.raises(ConfigError):
        GroupConfig(2, 2, 2, 1, 1, -3)


@given(helpers.arbitrary_configs())
def test_config_serialization_round_trip(config):
    data = config.to_dict()
    assert GroupConfig.from_dict(data) == config
    assert GroupConfig.from_dict(json.loads(config.canonical_json())) == config
    assert len(config.digest()) == 16


def test_config_digest_distinguishes():
    a = make_config(None, 2, 2, (1, 2, 1))
    b = make_config(None, 2, 2, (1, 1, 1))
    assert a.digest() != b.digest()
    assert a.digest() == make_config(None, 2, 2, (1, 2, 1)).digest()


@given(words)
def test_parse_spell_round_trip(word):
    assert parse_word(spell_word(word)) == word
    assert parse_word("e") == () and parse_word("") == ()
    with pytest.raises(DomainError):
        parse_word("rxq")


def test_element_rejects_bad_letters():
    group = Group(make_config(None, 2, 2))
    with pytest.raises(DomainError):
        group.element([0, 5])


def test_node_cap():
    with pytest.raises(NodeCapExceeded):
        Group(make_config(7, 3, 2), node_cap=1).element("rsrsrsr" * 3)
    # a big enough budget resolves the same word
    roomy = Group(make_config(7, 3, 2), node_cap=1_000_000)
    assert roomy.element("rsrsrsr" * 3).word == (0, 1, 0, 1, 0, 1, 0)


def test_shortlex_key_orders_ball():
    ball = Group(make_config(3, 3, 3)).ball(3)
    keys = [shortlex_key(w) for w in ball.elements]
    assert keys == sorted(keys)
