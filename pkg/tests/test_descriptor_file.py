import pytest

from dhtwistor import lattice as L
from dhtwistor.descriptor_file import DescriptorParseError, dump_descriptor, load_descriptor, parse_descriptor

GOOD = """\
k: 1
h1X: {rank: 0, torsion: []}
h2X: {rank: 1, torsion: [2]}
divisor_classes:
  - [2]
  - [1]
"""


def test_parse_good():
    d = parse_descriptor(GOOD, name="t")
    assert d.k == 1 and d.h2X == L.FgAbGroup(1, (2,))
    assert d.divisor_classes == ((2,), (1,))
    assert L.ns_u_tors(d) == L.FgAbGroup(0, (4,))


def test_round_trip_through_dump():
    for name in L.BUILTINS:
        d = L.builtin(name)
        back = parse_descriptor(dump_descriptor(d))
        assert (back.k, back.h1X, back.h2X, back.divisor_classes, back.name) == (d.k, d.h1X, d.h2X, d.divisor_classes, d.name)


@pytest.mark.parametrize("text,line,needle", [
    ("k: 1\nh1X: {rank: 0}\nh2X: {rank: 1}\ndivisor_classes:\n  - [1, 2]\n", 5, "expected k = 1"),
    ("k: 1\nh1X: {rank: 0}\nh2X: {rank: 2}\ndivisor_classes:\n  - [1]\n", 5, "expected 2"),
    ("k: x\nh1X: {rank: 0}\nh2X: {rank: 1}\ndivisor_classes: [[1]]\n", 1, "integer"),
    ("k: 1\nh1X: {rank: 0}\nh2X: {rank: 1, torsion: [2, 3]}\ndivisor_classes: [[1], [0]]\n", 3, "divisibility"),
    ("k: 1\nh1X: {rank: 0}\nh2X: {rank: 1}\ndivisor_classes: [[1.5]]\n", 4, "integer"),
    ("k: 1\nh1X: {rank: 0}\nh2X: {rank: 1}\n", 1, "missing key 'divisor_classes'"),
    ("k: 1\nh1X: {rank: 0}\nh2X: {rank: 1}\nextra: 3\ndivisor_classes: [[1]]\n", 4, "unknown key"),
    ("k: 1\nh1X: {rank: 0\n", 3, "invalid YAML"),
    ("k: 1\nh1X: {rank: -1}\nh2X: {rank: 1}\ndivisor_classes: [[1]]\n", 2, "nonnegative"),
])
def test_parse_errors_are_line_anchored(text, line, needle):
    with pytest.raises(DescriptorParseError) as e:
        parse_descriptor(text, source="f.yaml")
    assert needle in str(e.value)
    assert e.value.line == line
    assert f"f.yaml:{line}:" in str(e.value)


def test_load_file_and_builtin(tmp_path):
    p = tmp_path / "d.yaml"
    p.write_text(GOOD, encoding="utf-8")
    assert load_descriptor(str(p)).name == "d"
    assert load_descriptor("@genus2-k3").k == 3
    with pytest.raises(DescriptorParseError):
        load_descriptor(str(tmp_path / "missing.yaml"))
