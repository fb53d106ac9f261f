import pytest

from ktorsion.shorthand import UnresolvedShorthand, evaluate
from ktorsion.truncring import RingSpec, expand_line_bundle

SPEC = RingSpec((2, 2, 2, 2))


def test_products_of_variables():
    y = [SPEC.variable(i) for i in range(4)]
    assert evaluate("y124", SPEC) == y[0] * y[1] * y[3]
    assert evaluate("2*y1 - y34", SPEC) == y[0] * 2 - y[2] * y[3]


def test_x_and_z_names():
    x12 = expand_line_bundle(SPEC, (1, 1, 0, 0)) + 1
    assert evaluate("x12", SPEC) == x12
    assert evaluate("z12", SPEC) == x12 - 1
    assert evaluate("(y1 + y2)^2", SPEC) == SPEC.variable(0) * SPEC.variable(1) * 2


def test_bindings_and_errors():
    u = evaluate("y123 + y124", SPEC)
    assert evaluate("2*u", SPEC, {"u": u}) == u * 2
    with pytest.raises(UnresolvedShorthand):
        evaluate("q + 1", SPEC)
    with pytest.raises(UnresolvedShorthand):
        evaluate("y15", SPEC)
