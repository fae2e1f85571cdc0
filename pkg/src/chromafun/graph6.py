"""graph6 encoding and decoding.

The format: a size field N(n) followed by the upper triangle of the adjacency
matrix, column by column (x(0,1), x(0,2), x(1,2), x(0,3), ...), packed six
bits per byte, big-endian, each byte offset by 63.  Trailing pad bits are
zero.  An optional ``>>graph6<<`` header is accepted.
"""

from __future__ import annotations

from .errors import ParseError
from .graph import FiniteGraph

HEADER = ">>graph6<<"


def _size_field(n: int) -> list[int]:
    if n < 63:
        return [n]
    if n < 258048:
        return [63, (n >> 12) & 63, (n >> 6) & 63, n & 63]
    if n < 68719476736:
        return [63, 63] + [(n >> s) & 63 for s in (30, 24, 18, 12, 6, 0)]
    raise ValueError(f"graph too large for graph6: {n}")


def emit_graph6(g: FiniteGraph) -> str:
    n = g.vertex_count
    bits = []
    for j in range(1, n):
        for i in range(j):
            bits.append(1 if g.has_edge(i, j) else 0)
    bits.extend([0] * (-len(bits) % 6))
    words = _size_field(n)
    for k in range(0, len(bits), 6):
        w = 0
        for b in bits[k:k + 6]:
            w = (w << 1) | b
        words.append(w)
    return "".join(chr(w + 63) for w in words)


def parse_graph6(text: str) -> FiniteGraph:
    s = text.strip("\r\n")
    base = 0
    if s.startswith(HEADER):
        s = s[len(HEADER):]
        base = len(HEADER)
    if not s:
        raise ParseError("empty graph6 string", base)

    data = []
    for k, ch in enumerate(s):
        w = ord(ch) - 63
        if not 0 <= w <= 63:
            raise ParseError(f"byte {ch!r} outside the graph6 range 63..126", base + k)
        data.append(w)

    if data[0] < 63:
        n, pos = data[0], 1
    elif len(data) >= 2 and data[1] == 63:
        if len(data) < 8:
            raise ParseError("truncated 8-byte size field", base + len(data))
        n = 0
        for w in data[2:8]:
            n = (n << 6) | w
        pos = 8
    else:
        if len(data) < 4:
            raise ParseError("truncated 4-byte size field", base + len(data))
        n = (data[1] << 12) | (data[2] << 6) | data[3]
        pos = 4

    nbits = n * (n - 1) // 2
    expected = (nbits + 5) // 6
    body = data[pos:]
    if len(body) != expected:
        raise ParseError(
            f"expected {expected} adjacency bytes for {n} vertices, found {len(body)}",
            base + pos + min(len(body), expected),
        )

    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if (body[k // 6] >> (5 - k % 6)) & 1:
                edges.append((i, j))
            k += 1
    if nbits % 6:
        pad = 6 - nbits % 6
        if body[-1] & ((1 << pad) - 1):
            raise ParseError("nonzero padding bits", base + pos + len(body) - 1)
    return FiniteGraph.from_edges(n, edges)
