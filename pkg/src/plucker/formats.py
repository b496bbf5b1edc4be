"""Plain-text formats for tensors, matrices, matrix tuples and witnesses.

Tensor files::

    deg 2 space 2,2 basis e
    -2,-1 : 1
    1,2 : -3/4

A header ending in ``dense`` is followed by all C(d, p) coefficients in
lexicographic order of index sets, separated by whitespace.  Lines
starting with ``#`` are comments everywhere.
"""

from __future__ import annotations

import json
from itertools import combinations
from typing import List

from .exterior import AltTensor, LinearMap, SpaceSpec
from .maya import format_partition
from .scalar import QQ, ModP, format_scalar, parse_field
from .tuples import MatrixTuple, TotPoint


class FormatError(ValueError):
    pass


def _lines(text: str) -> List[str]:
    return [l.strip() for l in text.splitlines() if l.strip() and not l.strip().startswith("#")]


def _blocks(text: str) -> List[List[str]]:
    blocks, cur = [], []
    for raw in text.splitlines():
        line = raw.strip()
        if line.startswith("#"):
            continue
        if not line:
            if cur:
                blocks.append(cur)
                cur = []
            continue
        cur.append(line)
    if cur:
        blocks.append(cur)
    return blocks


def _scalar(text: str, field):
    try:
        return field.parse(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError("bad scalar %r: %s" % (text, exc))


def _plain(x):
    # keep rationals as Fraction/int; field elements stay ModP
    return x if isinstance(x, ModP) else (x.numerator if x.denominator == 1 else x)


def parse_header(line: str):
    tok = line.split()
    try:
        if tok[0] != "deg" or tok[2] != "space" or tok[4] != "basis":
            raise IndexError
        p = int(tok[1])
        n, pp = (int(t) for t in tok[3].split(","))
        basis = tok[5]
    except (IndexError, ValueError):
        raise FormatError("tensor header must read 'deg p space n,p basis x|e [dense]', got %r" % line)
    dense = len(tok) > 6 and tok[6] == "dense"
    if len(tok) > 6 and not dense:
        raise FormatError("unexpected header token %r" % tok[6])
    try:
        space = SpaceSpec(n, pp, basis)
    except ValueError as exc:
        raise FormatError(str(exc))
    return p, space, dense


def read_tensor(text: str, field=QQ) -> AltTensor:
    lines = _lines(text)
    if not lines:
        raise FormatError("empty tensor file")
    p, space, dense = parse_header(lines[0])
    if p > space.dim:
        raise FormatError("degree %d exceeds dimension %d" % (p, space.dim))
    coeffs = {}
    if dense:
        values = " ".join(lines[1:]).split()
        sets = list(combinations(space.labels(), p))
        if len(values) != len(sets):
            raise FormatError("dense tensor needs %d coefficients, got %d" % (len(sets), len(values)))
        for I, v in zip(sets, values):
            coeffs[I] = _plain(_scalar(v, field))
    else:
        for line in lines[1:]:
            if ":" not in line:
                raise FormatError("term line must read 'i1,...,ip : scalar', got %r" % line)
            left, right = line.split(":", 1)
            try:
                labels = tuple(int(t) for t in left.split(",") if t.strip())
            except ValueError:
                raise FormatError("bad labels in %r" % line)
            if len(labels) != p:
                raise FormatError("term %r does not have degree %d" % (line, p))
            I = tuple(sorted(labels))
            if len(set(I)) != p:
                continue
            sign = 1
            for a in range(p):
                for b in range(a + 1, p):
                    if labels[a] > labels[b]:
                        sign = -sign
            coeffs[I] = coeffs.get(I, 0) + sign * _plain(_scalar(right, field))
    try:
        return AltTensor(space, p, coeffs)
    except ValueError as exc:
        raise FormatError(str(exc))


def write_tensor(omega: AltTensor, dense: bool = False) -> str:
    s = omega.space
    head = "deg %d space %d,%d basis %s" % (omega.degree, s.n, s.p, s.basis)
    if dense:
        return head + " dense\n" + " ".join(format_scalar(c) for c in omega.dense()) + "\n"
    body = "".join("%s : %s\n" % (",".join(map(str, I)), format_scalar(c)) for I, c in omega.coeffs.items())
    return head + "\n" + body


def read_matrix(lines: List[str], field=QQ) -> List[List[object]]:
    rows = [[_plain(_scalar(t, field)) for t in line.split()] for line in lines]
    if rows and len({len(r) for r in rows}) != 1:
        raise FormatError("ragged matrix")
    return rows


def write_matrix(m) -> str:
    return "".join(" ".join(format_scalar(x) for x in row) + "\n" for row in m)


def read_tuple(text: str, field=QQ) -> MatrixTuple:
    blocks = _blocks(text)
    if not blocks:
        raise FormatError("empty tuple file")
    try:
        p, n1, n2 = (int(t) for t in blocks[0][0].split())
    except ValueError:
        raise FormatError("tuple header must read 'p N1 N2'")
    rest = blocks[0][1:]
    mats = ([rest] if rest else []) + blocks[1:]
    if len(mats) != p:
        raise FormatError("expected %d matrices, found %d" % (p, len(mats)))
    out = []
    for b in mats:
        m = read_matrix(b, field)
        if MatrixTuple.shape_of(m) != (n1, n2):
            raise FormatError("matrix of shape %r, expected %r" % (MatrixTuple.shape_of(m), (n1, n2)))
        out.append(m)
    return MatrixTuple(out)


def write_tuple(M: MatrixTuple) -> str:
    n1, n2 = M.shape
    return "%d %d %d\n" % (M.p, n1, n2) + "\n".join(write_matrix(m) for m in M.mats)


def read_tot(text: str, field=QQ) -> TotPoint:
    """Header 'tot p N n m d', then p N x N matrices, x^col, x^row and t (empty blocks omitted)."""
    blocks = _blocks(text)
    if not blocks:
        raise FormatError("empty point file")
    head = blocks[0][0].split()
    if len(head) != 6 or head[0] != "tot":
        raise FormatError("point header must read 'tot p N n m d'")
    p, N, n, m, d = (int(t) for t in head[1:])
    rest = blocks[0][1:]
    blocks = ([rest] if rest else []) + blocks[1:]
    want = p + (1 if n else 0) + (1 if m else 0) + (1 if d else 0)
    if len(blocks) != want:
        raise FormatError("expected %d blocks, found %d" % (want, len(blocks)))
    mats = [read_matrix(b, field) for b in blocks[:p]]
    k = p
    col = read_matrix(blocks[k], field) if n else [[] for _ in range(N)]
    k += 1 if n else 0
    row = read_matrix(blocks[k], field) if m else []
    k += 1 if m else 0
    t = read_matrix(blocks[k], field)[0] if d else []
    try:
        x = TotPoint(MatrixTuple(mats), col, row, t)
    except ValueError as exc:
        raise FormatError(str(exc))
    if (x.N, x.n, x.m, len(x.t)) != (N, n, m, d):
        raise FormatError("block shapes do not match the header")
    return x


def write_tot(x: TotPoint) -> str:
    parts = [write_matrix(m) for m in x.ma.mats]
    if x.n:
        parts.append(write_matrix(x.col))
    if x.m:
        parts.append(write_matrix(x.row))
    if x.t:
        parts.append(write_matrix([x.t]))
    head = "tot %d %d %d %d %d\n" % (x.ma.p, x.N, x.n, x.m, len(x.t))
    return head + "\n".join(parts)


def field_name(field) -> str:
    return "q" if field.modulus is None else "fp:%d" % field.modulus


def witness_to_json(witness, variety: str, field, method: str) -> str:
    data = {"variety": variety, "field": field_name(field), "method": method}
    if method == "randomized":
        g = witness.g
        data.update({
            "group": [g.domain.n, g.domain.p],
            "g": [[format_scalar(x) for x in row] for row in g.matrix],
            "index": witness.index,
            "value": format_scalar(witness.value),
            "trial": witness.trial,
        })
    elif method == "symbolic":
        data.update({"index": witness.index, "terms": witness.terms})
    else:
        data.update({"detail": repr(witness)})
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def witness_from_json(text: str):
    """(variety string, field, RandomWitness) from a randomized witness file."""
    from .membership import RandomWitness
    data = json.loads(text)
    if data.get("method") != "randomized":
        raise FormatError("only randomized witnesses carry a matrix to re-check")
    field = parse_field(data["field"])
    N, P = data["group"]
    space = SpaceSpec(N, P, "e")
    rows = [[_plain(_scalar(x, field)) for x in row] for row in data["g"]]
    g = LinearMap(space, space, rows)
    value = _plain(_scalar(data["value"], field))
    return data["variety"], field, RandomWitness(g, data["index"], value, data.get("trial", 0))


__all__ = ["FormatError", "read_tensor", "write_tensor", "read_matrix", "write_matrix", "read_tuple",
           "write_tuple", "read_tot", "write_tot", "witness_to_json", "witness_from_json",
           "format_partition"]
