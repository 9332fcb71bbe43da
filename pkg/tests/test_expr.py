import pytest

from biconserve.errors import ContractViolation
from biconserve.expr import (Call, Const, Mul, Pow, ProfileCall, Var, eval_value,
                             node_repr, parse)


def test_parse_basic_precedence():
    e = parse("s + t*u - v/2")
    assert eval_value(e, (1.0, 2.0, 3.0, 4.0)) == pytest.approx(1 + 6 - 2)


def test_parse_power_forms():
    assert eval_value(parse("s^2"), (3, 0, 0, 0)) == 9.0
    assert eval_value(parse("s**2"), (3, 0, 0, 0)) == 9.0
    assert eval_value(parse("s^(-2)"), (2, 0, 0, 0)) == 0.25
    assert eval_value(parse("(1 + s)^0.5"), (3, 0, 0, 0)) == 2.0


def test_parse_unary_minus_and_functions():
    assert eval_value(parse("-s + cos(0)"), (2, 0, 0, 0)) == -1.0
    assert eval_value(parse("2*-s"), (1.5, 0, 0, 0)) == -3.0
    assert eval_value(parse("exp(0) + sqrt(4)"), (0, 0, 0, 0)) == 3.0


def test_parse_profile_call_shape():
    e = parse("phi(s)*cos(v)")
    assert isinstance(e, Mul)
    assert isinstance(e.a, ProfileCall) and e.a.name == "phi"
    assert isinstance(e.b, Call) and e.b.fn == "cos"


def test_parse_custom_variable_names():
    e = parse("t1^2 + t3", ("s", "t1", "t2", "t3", "t4"))
    assert eval_value(e, (0, 2, 0, 5, 0)) == 9.0


def test_parse_rejects_unknown_names_and_trailing():
    with pytest.raises(ContractViolation):
        parse("w + 1")
    with pytest.raises(ContractViolation):
        parse("s + ")
    with pytest.raises(ContractViolation):
        parse("s 3")


def test_exponent_must_be_literal():
    with pytest.raises(ContractViolation):
        parse("s^t")


def test_node_repr_round_trips_through_parser():
    from biconserve.profiles import ExprProfile

    bank = {"phi": ExprProfile(parse("s + 1", ("s",)))}
    texts = ["(s + t)", "phi(s)*cos(v)", "s^2.5", "(1/(s - 2))", "sqrt(u + 2)"]
    for text in texts:
        e = parse(text)
        e2 = parse(node_repr(e))
        pt = (0.3, 0.4, 0.5, 0.6)
        assert eval_value(e, pt, bank) == pytest.approx(eval_value(e2, pt, bank), rel=1e-15)


def test_operator_overloading_builds_trees():
    s, t = Var(0, "s"), Var(1, "t")
    e = (s + 2) * t - s / t
    assert eval_value(e, (1.0, 2.0)) == pytest.approx(6 - 0.5)
    assert isinstance(s ** 2.0, Pow)
    assert isinstance((-s), type(parse("-s")))


def test_constants_fold_to_nodes():
    e = parse("3.5e-2 + .5")
    assert isinstance(e.a, Const)
    assert eval_value(e, (0, 0, 0, 0)) == pytest.approx(0.535)
