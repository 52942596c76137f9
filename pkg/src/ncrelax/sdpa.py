"""Reader and writer for the sparse SDPA format (``.dat-s``).

The problem is ``min c.x  s.t.  sum_l F_l x_l - F_0 >= 0`` (PSD). Each
nonzero upper-triangular entry of ``F_l`` is one line ``l b i j v``.
"""
from __future__ import annotations

import io
import re
from dataclasses import dataclass
from typing import Iterable, List, NamedTuple, Sequence, TextIO, Tuple, Union

__all__ = [
    "SparseEntry",
    "SDPProblem",
    "SDPAError",
    "SDPAParseError",
    "InvariantViolation",
    "to_sdp",
    "write_sdpa",
    "read_sdpa",
    "dumps",
    "loads",
]


class SDPAError(ValueError):
    pass


class SDPAParseError(SDPAError):
    def __init__(self, message: str, line: int = 0):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


class InvariantViolation(SDPAError):
    pass


class SparseEntry(NamedTuple):
    l: int
    b: int
    i: int
    j: int
    v: float


@dataclass(frozen=True)
class SDPProblem:
    """Standard-form SDP data.

    ``block_sizes`` uses the SDPA convention: a negative size marks a
    diagonal block. Entries are kept sorted by ``(l, b, i, j)``.
    """

    nvars: int
    block_sizes: Tuple[int, ...]
    c: Tuple[float, ...]
    entries: Tuple[SparseEntry, ...]

    def __post_init__(self):
        object.__setattr__(self, "block_sizes", tuple(int(s) for s in self.block_sizes))
        object.__setattr__(self, "c", tuple(float(v) for v in self.c))
        entries = tuple(sorted(SparseEntry(int(e[0]), int(e[1]), int(e[2]), int(e[3]), float(e[4]))
                               for e in self.entries))
        object.__setattr__(self, "entries", entries)
        self.validate()

    def validate(self) -> None:
        if self.nvars < 0:
            raise InvariantViolation("number of variables must be nonnegative")
        if len(self.c) != self.nvars:
            raise InvariantViolation(f"objective has {len(self.c)} values, expected {self.nvars}")
        if any(s == 0 for s in self.block_sizes):
            raise InvariantViolation("block sizes must be nonzero")
        seen = set()
        for e in self.entries:
            _check_entry(e, self.nvars, self.block_sizes)
            key = e[:4]
            if key in seen:
                raise InvariantViolation(f"duplicate entry {key}")
            seen.add(key)

    @property
    def nblocks(self) -> int:
        return len(self.block_sizes)


def _check_entry(e: SparseEntry, nvars: int, block_sizes: Sequence[int]) -> None:
    if not 0 <= e.l <= nvars:
        raise InvariantViolation(f"variable index {e.l} outside 0..{nvars}")
    if not 1 <= e.b <= len(block_sizes):
        raise InvariantViolation(f"block index {e.b} outside 1..{len(block_sizes)}")
    size = block_sizes[e.b - 1]
    if not 1 <= e.i <= e.j <= abs(size):
        raise InvariantViolation(f"entry ({e.i}, {e.j}) is not upper-triangular within block of size {abs(size)}")
    if size < 0 and e.i != e.j:
        raise InvariantViolation(f"off-diagonal entry ({e.i}, {e.j}) in diagonal block {e.b}")
    if e.v == 0:
        raise InvariantViolation("zero-valued entries are not stored")


def to_sdp(rel) -> SDPProblem:
    """Flatten a :class:`~ncrelax.relaxation.Relaxation` into SDPA data.

    A constant ``k`` in an entry goes to ``F_0`` as ``-k``.
    """
    entries = []
    for b, block in enumerate(rel.blocks, start=1):
        for (i, j), expr in block.entries.items():
            for l, v in expr.coeffs.items():
                entries.append(SparseEntry(l, b, i + 1, j + 1, v))
            if expr.constant:
                entries.append(SparseEntry(0, b, i + 1, j + 1, -expr.constant))
    c = [0.0] * rel.nvars
    for l, v in rel.objective.items():
        c[l - 1] = v
    return SDPProblem(rel.nvars, tuple(rel.block_sizes), tuple(c), tuple(entries))


def _fmt(value: float) -> str:
    return repr(float(value))


def write_sdpa(problem: SDPProblem, sink: TextIO) -> None:
    sink.write(f"{problem.nvars}\n")
    sink.write(f"{problem.nblocks}\n")
    sink.write(" ".join(str(s) for s in problem.block_sizes) + "\n")
    sink.write(" ".join(_fmt(v) for v in problem.c) + "\n")
    for e in problem.entries:
        sink.write(f"{e.l} {e.b} {e.i} {e.j} {_fmt(e.v)}\n")


def dumps(problem: SDPProblem) -> str:
    buf = io.StringIO()
    write_sdpa(problem, buf)
    return buf.getvalue()


_PUNCT = re.compile(r"[{}(),]")


def _tokens(line: str) -> List[str]:
    return _PUNCT.sub(" ", line).split()


def _int(token: str, line: int) -> int:
    try:
        return int(token)
    except ValueError:
        try:
            value = float(token)
        except ValueError:
            raise SDPAParseError(f"expected an integer, got {token!r}", line) from None
        if not value.is_integer():
            raise SDPAParseError(f"expected an integer, got {token!r}", line)
        return int(value)


def _float(token: str, line: int) -> float:
    try:
        return float(token)
    except ValueError:
        raise SDPAParseError(f"expected a number, got {token!r}", line) from None


def read_sdpa(source: Union[TextIO, Iterable[str]]) -> SDPProblem:
    """Parse sparse SDPA text.

    Comment lines starting with ``"`` or ``*`` may precede the header.
    Braces, parentheses and commas count as whitespace.
    """
    lines = enumerate(source, start=1)

    def next_content():
        for lineno, raw in lines:
            text = raw.strip()
            if not text:
                continue
            return lineno, text
        return None, None

    # header: comments allowed before the first data line
    lineno, text = None, None
    for lineno, raw in lines:
        text = raw.strip()
        if not text or text[0] in "\"*":
            continue
        break
    else:
        raise SDPAParseError("missing header")
    toks = _tokens(text)
    if not toks:
        raise SDPAParseError("missing number of variables", lineno)
    nvars = _int(toks[0], lineno)

    lineno, text = next_content()
    if text is None:
        raise SDPAParseError("missing number of blocks")
    toks = _tokens(text)
    if not toks:
        raise SDPAParseError("missing number of blocks", lineno)
    nblocks = _int(toks[0], lineno)
    if nblocks < 0:
        raise SDPAParseError("negative number of blocks", lineno)

    sizes: List[int] = []
    while len(sizes) < nblocks:
        lineno, text = next_content()
        if text is None:
            raise SDPAParseError("missing block sizes")
        sizes.extend(_int(t, lineno) for t in _tokens(text))
    sizes = sizes[:nblocks]

    c: List[float] = []
    while len(c) < nvars:
        lineno, text = next_content()
        if text is None:
            raise SDPAParseError("missing objective values")
        c.extend(_float(t, lineno) for t in _tokens(text))
    if len(c) > nvars:
        raise SDPAParseError(f"expected {nvars} objective values, got {len(c)}", lineno)

    entries = []
    seen = set()
    for lineno, raw in lines:
        toks = _tokens(raw)
        if not toks:
            continue
        if len(toks) != 5:
            raise SDPAParseError(f"expected 5 fields 'l b i j v', got {len(toks)}", lineno)
        e = SparseEntry(_int(toks[0], lineno), _int(toks[1], lineno), _int(toks[2], lineno),
                        _int(toks[3], lineno), _float(toks[4], lineno))
        try:
            _check_entry(e, nvars, sizes)
        except InvariantViolation as exc:
            raise InvariantViolation(f"line {lineno}: {exc}") from None
        if e[:4] in seen:
            raise InvariantViolation(f"line {lineno}: duplicate entry {e[:4]}")
        seen.add(e[:4])
        entries.append(e)
    return SDPProblem(nvars, tuple(sizes), tuple(c), tuple(entries))


def loads(text: str) -> SDPProblem:
    return read_sdpa(io.StringIO(text))
