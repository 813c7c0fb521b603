from __future__ import annotations

import xml.etree.ElementTree as ET

import pytest

from tests.helpers import code_for
from tricolor.lattice import build_hex_torus, build_triangle_488, build_triangle_666
from tricolor.pauli import PauliOperator
from tricolor.render import render_svg

NS = "{http://www.w3.org/2000/svg}"


@pytest.mark.parametrize(
    "lat", [build_hex_torus(3, 3), build_triangle_666(5), build_triangle_488(5)], ids=["torus", "666", "488"]
)
def test_svg_structure(lat):
    svg = render_svg(lat)
    root = ET.fromstring(svg.encode())
    assert root.tag == NS + "svg" and root.get("version") == "1.1"
    assert len(root.findall(f".//{NS}polygon")) == len(lat.plaquettes)
    assert len(root.findall(f".//{NS}line")) == len(lat.links)
    assert len(root.findall(f".//{NS}circle")) == lat.n
    assert (root.find(f".//{NS}g[@id='borders']") is not None) == bool(lat.borders)


def test_svg_is_deterministic():
    lat = build_triangle_488(7)
    assert render_svg(lat) == render_svg(build_triangle_488(7))


def test_overlay_labels_support(tri3):
    xhat, zhat = tri3.logical_reps[0]
    mixed = PauliOperator(7, 0b0000011, 0b0000110)
    root = ET.fromstring(render_svg(tri3.lattice, [xhat, mixed]).encode())
    labels0 = [t.text for t in root.find(f".//{NS}g[@id='overlay0']").iter(NS + "text")]
    labels1 = [t.text for t in root.find(f".//{NS}g[@id='overlay1']").iter(NS + "text")]
    assert labels0 == ["X"] * 7
    assert labels1 == ["X", "Y", "Z"]


def test_overlay_size_mismatch():
    code = code_for("tri-666", 3)
    with pytest.raises(ValueError):
        render_svg(code.lattice, [PauliOperator.identity(5)])
