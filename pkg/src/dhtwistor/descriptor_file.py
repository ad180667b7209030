"""YAML descriptor files.

    k: 2
    h1X: {rank: 0, torsion: []}
    h2X: {rank: 1, torsion: []}
    divisor_classes:
      - [1, 1]

``divisor_classes`` has one row per generator of h2X (free generators first)
and k entries per row.  Errors carry the line number of the offending node.
"""

from __future__ import annotations

from pathlib import Path

import yaml

from .lattice import FgAbGroup, GeometryDescriptor, builtin


class DescriptorParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str = "<descriptor>"):
        loc = f"{source}:{line}" if line is not None else source
        super().__init__(f"{loc}: {message}")
        self.line = line


def _line(node) -> int:
    return node.start_mark.line + 1


def _int(node, what, source) -> int:
    if not isinstance(node, yaml.ScalarNode) or node.tag != "tag:yaml.org,2002:int":
        raise DescriptorParseError(f"{what} must be an integer", _line(node), source)
    return int(yaml.safe_load(node.value))


def _mapping(node, what, source) -> dict:
    if not isinstance(node, yaml.MappingNode):
        raise DescriptorParseError(f"{what} must be a mapping", _line(node), source)
    out = {}
    for key, value in node.value:
        if key.value in out:
            raise DescriptorParseError(f"duplicate key {key.value!r}", _line(key), source)
        out[key.value] = (key, value)
    return out


def _sequence(node, what, source) -> list:
    if not isinstance(node, yaml.SequenceNode):
        raise DescriptorParseError(f"{what} must be a list", _line(node), source)
    return node.value


def _group(node, what, source) -> FgAbGroup:
    fields = _mapping(node, what, source)
    unknown = set(fields) - {"rank", "torsion"}
    if unknown:
        key = fields[sorted(unknown)[0]][0]
        raise DescriptorParseError(f"unknown key {key.value!r} in {what}", _line(key), source)
    if "rank" not in fields:
        raise DescriptorParseError(f"{what} needs a rank", _line(node), source)
    rank = _int(fields["rank"][1], f"{what}.rank", source)
    if rank < 0:
        raise DescriptorParseError(f"{what}.rank must be nonnegative", _line(fields["rank"][1]), source)
    torsion = []
    if "torsion" in fields:
        for item in _sequence(fields["torsion"][1], f"{what}.torsion", source):
            t = _int(item, f"{what}.torsion entry", source)
            if t <= 1:
                raise DescriptorParseError(f"torsion orders must exceed 1, got {t}", _line(item), source)
            torsion.append(t)
    try:
        return FgAbGroup(rank, tuple(torsion))
    except ValueError as e:
        raise DescriptorParseError(str(e), _line(fields["torsion"][1]), source) from None


def parse_descriptor(text: str, source: str = "<descriptor>", name: str | None = None) -> GeometryDescriptor:
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.MarkedYAMLError as e:
        line = e.problem_mark.line + 1 if e.problem_mark else None
        raise DescriptorParseError(f"invalid YAML: {e.problem}", line, source) from None
    if root is None:
        raise DescriptorParseError("empty descriptor", 1, source)
    fields = _mapping(root, "descriptor", source)
    for key in ("k", "h1X", "h2X", "divisor_classes"):
        if key not in fields:
            raise DescriptorParseError(f"missing key {key!r}", _line(root), source)
    unknown = set(fields) - {"k", "h1X", "h2X", "divisor_classes", "name"}
    if unknown:
        key = fields[sorted(unknown)[0]][0]
        raise DescriptorParseError(f"unknown key {key.value!r}", _line(key), source)

    k = _int(fields["k"][1], "k", source)
    if k < 0:
        raise DescriptorParseError("k must be nonnegative", _line(fields["k"][1]), source)
    h1X = _group(fields["h1X"][1], "h1X", source)
    h2X = _group(fields["h2X"][1], "h2X", source)

    rows_node = fields["divisor_classes"][1]
    rows = []
    for row in _sequence(rows_node, "divisor_classes", source):
        entries = _sequence(row, "divisor_classes row", source)
        if len(entries) != k:
            raise DescriptorParseError(f"row has {len(entries)} entries, expected k = {k}", _line(row), source)
        rows.append(tuple(_int(e, "divisor class entry", source) for e in entries))
    if len(rows) != h2X.ngens:
        raise DescriptorParseError(
            f"divisor_classes has {len(rows)} rows, expected {h2X.ngens} (one per generator of {h2X})",
            _line(rows_node), source,
        )
    if "name" in fields:
        name = fields["name"][1].value
    return GeometryDescriptor(k, h1X, h2X, tuple(rows), name=name or Path(source).stem)


def load_descriptor(spec: str) -> GeometryDescriptor:
    """``@name`` selects a built-in, anything else is a path."""
    if spec.startswith("@"):
        return builtin(spec[1:])
    path = Path(spec)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise DescriptorParseError(f"cannot read file: {e.strerror}", None, spec) from None
    except UnicodeDecodeError:
        raise DescriptorParseError("file is not valid UTF-8", None, spec) from None
    return parse_descriptor(text, source=spec)


def dump_descriptor(d: GeometryDescriptor) -> str:
    doc = {
        "name": d.name,
        "k": d.k,
        "h1X": {"rank": d.h1X.rank, "torsion": list(d.h1X.torsion)},
        "h2X": {"rank": d.h2X.rank, "torsion": list(d.h2X.torsion)},
        "divisor_classes": [list(r) for r in d.divisor_classes],
    }
    return yaml.safe_dump(doc, sort_keys=False, default_flow_style=None)
