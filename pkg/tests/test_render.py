from fractions import Fraction

import pytest

from dendromap.errors import DomainError
from dendromap.render import locate, render_svg, skeleton_layout
from dendromap.space import LengthTable, cut, end

F = Fraction


def table():
    return LengthTable(lambda w: w[:-1])


def test_layout_counts():
    layout = skeleton_layout(table(), 2, letter_exponent=1)
    # Root arc plus one child and one grandchild per halving letter.
    assert len(layout) == 3
    layout = skeleton_layout(table(), 2, letter_exponent=2)
    assert len(layout) == 1 + 3 + 9


def test_layout_geometry():
    layout = skeleton_layout(table(), 1, letter_exponent=1)
    root = layout[()]
    assert (root.x0, root.y0, root.x1, root.y1) == (0.0, 0.0, 1.0, 0.0)
    child = layout[(F(1, 2),)]
    assert child.x0 == pytest.approx(0.5)
    assert child.y0 == pytest.approx(0.0)
    # Drawn length matches the table, heading is 45 degrees.
    dx, dy = child.x1 - child.x0, child.y1 - child.y0
    assert (dx * dx + dy * dy) ** 0.5 == pytest.approx(0.5)
    assert dy == pytest.approx(dx)


def test_locate():
    layout = skeleton_layout(table(), 1, letter_exponent=1)
    assert locate(layout, cut((), F(1, 4))) == (0.25, 0.0)
    assert locate(layout, cut((F(1, 4),), F(1, 2))) is None
    assert locate(layout, end((F(1, 2), F(1, 2)))) is None


def test_svg_is_deterministic():
    a = render_svg(table(), 2, letter_exponent=2)
    b = render_svg(table(), 2, letter_exponent=2)
    assert a == b
    assert a.startswith("<svg ")
    assert a.count("<line ") == 13
    assert a.endswith("</svg>")


def test_svg_orbit_overlay():
    # Points off the drawn universe (undrawn arcs, end cylinders) are skipped.
    orbit = [cut((), F(1, 2)), cut((F(1, 4),), F(1, 2)), end((F(1, 2), F(1, 2)))]
    svg = render_svg(table(), 1, letter_exponent=1, orbit=orbit)
    assert svg.count("<circle ") == 1


def test_negative_depth_rejected():
    with pytest.raises(DomainError):
        skeleton_layout(table(), -1)
