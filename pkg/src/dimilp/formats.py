"""Plain-text instance format.

::

    # comment
    dim 2 1          # d and d_Z (integer coordinates come first)
    M 150
    c 1 0
    seed 7           # optional provenance
    1 10 18          # a_1 ... a_d b   meaning  a.z <= b
    -5 -8 4

All numbers are exact rationals written ``p/q`` (or ``p`` when ``q = 1``).
"""

from typing import Optional

from .cuts import IntegralitySplit
from .exact import format_rat, parse_rat
from .oracles import MilpInstance
from .polyhedra import ConstraintSet, Halfspace


def dumps_instance(inst: MilpInstance, seed: Optional[int] = None) -> str:
    lines = [f"dim {inst.d} {inst.split.d_Z}", f"M {format_rat(inst.M)}",
             "c " + " ".join(format_rat(x) for x in inst.c)]
    if seed is not None:
        lines.append(f"seed {seed}")
    for h in inst.constraints:
        lines.append(" ".join(format_rat(x) for x in h.a + (h.b,)))
    return "\n".join(lines) + "\n"


def loads_instance(text: str) -> MilpInstance:
    d = d_Z = M = c = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, *rest = line.split()
        if key == "dim":
            d, d_Z = int(rest[0]), int(rest[1])
        elif key == "M":
            M = parse_rat(rest[0])
        elif key == "c":
            c = tuple(parse_rat(x) for x in rest)
        elif key == "seed":
            pass
        else:
            vals = [parse_rat(x) for x in line.split()]
            if d is None or len(vals) != d + 1:
                raise ValueError(f"line {lineno}: expected {d} coefficients and a bound")
            rows.append(Halfspace(tuple(vals[:d]), vals[d]))
    if d is None or M is None or c is None:
        raise ValueError("instance text needs 'dim', 'M' and 'c' lines")
    return MilpInstance(ConstraintSet(tuple(rows), d), c, IntegralitySplit(d_Z, d - d_Z), M)


def write_instance(inst: MilpInstance, path, seed: Optional[int] = None) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_instance(inst, seed))


def read_instance(path) -> MilpInstance:
    with open(path) as fh:
        return loads_instance(fh.read())
