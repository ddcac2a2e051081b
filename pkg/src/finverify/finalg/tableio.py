"""Line-oriented text format for ring, module, and map tables.

Headers are `ring <size>`, `module <ring-id> <size>`, `map <dom-id> <cod-id>`
where ids count objects of the referenced kind in file order, starting at 0
(modules reference rings; maps reference modules). Blocks `add`, `mul`/`act`,
`neg`, `table` hold rows of space-separated indices. The format round-trips
bit-exactly: parse, serialize, parse yields identical tables.
"""
from __future__ import annotations

from ..errors import TableError
from .modules import FiniteModule, LinearMap, linear_map, make_module
from .rings import FiniteRing, make_ring


def _rows(table):
    return "\n".join(" ".join(str(v) for v in row) for row in table)


def serialize(items) -> str:
    """Serialize rings, modules, and maps; referenced objects are emitted first."""
    rings: list[FiniteRing] = []
    modules: list[FiniteModule] = []
    chunks: list[str] = []

    def emit_ring(r: FiniteRing) -> int:
        for i, seen in enumerate(rings):
            if seen == r:
                return i
        rings.append(r)
        chunks.append(f"ring {r.size}\nadd\n{_rows(r.add)}\nmul\n{_rows(r.mul)}\n"
                      f"neg\n{' '.join(str(v) for v in r.neg)}")
        return len(rings) - 1

    def emit_module(m: FiniteModule) -> int:
        for i, seen in enumerate(modules):
            if seen == m:
                return i
        rid = emit_ring(m.ring)
        modules.append(m)
        chunks.append(f"module {rid} {m.size}\nadd\n{_rows(m.add)}\nact\n"
                      f"{_rows(m.act)}\nneg\n{' '.join(str(v) for v in m.neg)}")
        return len(modules) - 1

    for item in items:
        if isinstance(item, FiniteRing):
            emit_ring(item)
        elif isinstance(item, FiniteModule):
            emit_module(item)
        elif isinstance(item, LinearMap):
            did = emit_module(item.dom)
            cid = emit_module(item.cod)
            chunks.append(f"map {did} {cid}\ntable\n"
                          f"{' '.join(str(v) for v in item.table)}")
        else:
            raise TableError(f"cannot serialize {type(item).__name__}")
    return "\n\n".join(chunks) + "\n"


def parse(text: str):
    """Parse a table file; returns objects in file order, fully validated."""
    tokens: list[list[str]] = [ln.split() for ln in text.splitlines() if ln.split()]
    out: list = []
    rings: list[FiniteRing] = []
    modules: list[FiniteModule] = []
    pos = 0

    def take_row(n: int) -> list[int]:
        nonlocal pos
        if pos >= len(tokens) or len(tokens[pos]) != n:
            raise TableError(f"expected a row of {n} indices at line block {pos}")
        try:
            row = [int(v) for v in tokens[pos]]
        except ValueError as e:
            raise TableError(f"non-integer table entry: {e}")
        pos += 1
        return row

    def take_block(label: str, nrows: int, ncols: int):
        nonlocal pos
        if pos >= len(tokens) or tokens[pos] != [label]:
            raise TableError(f"expected block label {label!r}")
        pos += 1
        return [take_row(ncols) for _ in range(nrows)]

    while pos < len(tokens):
        head = tokens[pos]
        pos += 1
        if head[0] == "ring" and len(head) == 2:
            size = int(head[1])
            add = take_block("add", size, size)
            mul = take_block("mul", size, size)
            neg = take_block("neg", 1, size)[0]
            ring = make_ring(size, add, mul, neg, name=f"ring{len(rings)}")
            rings.append(ring)
            out.append(ring)
        elif head[0] == "module" and len(head) == 3:
            rid, size = int(head[1]), int(head[2])
            if not 0 <= rid < len(rings):
                raise TableError(f"module references unknown ring {rid}")
            ring = rings[rid]
            add = take_block("add", size, size)
            act = take_block("act", ring.size, size)
            neg = take_block("neg", 1, size)[0]
            mod = make_module(ring, size, add, act, neg,
                              name=f"module{len(modules)}")
            modules.append(mod)
            out.append(mod)
        elif head[0] == "map" and len(head) == 3:
            did, cid = int(head[1]), int(head[2])
            if not (0 <= did < len(modules) and 0 <= cid < len(modules)):
                raise TableError("map references an unknown module")
            dom, cod = modules[did], modules[cid]
            table = take_block("table", 1, dom.size)[0]
            out.append(linear_map(dom, cod, table))
        else:
            raise TableError(f"unrecognized header {' '.join(head)!r}")
    return out
