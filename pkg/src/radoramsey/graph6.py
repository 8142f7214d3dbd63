"""graph6 encoding of small undirected graphs, bit-exact per the de-facto layout.

Only the features needed here: graphs on up to 258047 vertices, optional
">>graph6<<" header, upper triangle packed column-wise into 6-bit groups,
each group stored as one printable byte offset by 63.
"""

from __future__ import annotations

from .errors import DomainError

HEADER = ">>graph6<<"


def _encode_size(n: int) -> str:
    if n < 0:
        raise DomainError("negative vertex count")
    if n <= 62:
        return chr(n + 63)
    if n <= 258047:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    raise DomainError(f"vertex count {n} too large for this writer")


def _decode_size(data: str) -> tuple[int, str]:
    if not data:
        raise DomainError("empty graph6 string")
    if data[0] == "~":
        if len(data) >= 2 and data[1] == "~":
            raise DomainError("graphs beyond 258047 vertices unsupported")
        if len(data) < 4:
            raise DomainError("truncated graph6 size field")
        vals = [ord(c) - 63 for c in data[1:4]]
        if any(v < 0 or v > 63 for v in vals):
            raise DomainError("bad graph6 size byte")
        return (vals[0] << 12) | (vals[1] << 6) | vals[2], data[4:]
    n = ord(data[0]) - 63
    if n < 0 or n > 62:
        raise DomainError(f"bad graph6 size byte {data[0]!r}")
    return n, data[1:]


def write_graph6(n: int, has_edge, header: bool = False) -> str:
    """Encode a graph given its vertex count and an edge predicate has_edge(i, j)."""
    bits = []
    for j in range(1, n):
        for i in range(j):
            bits.append(1 if has_edge(i, j) else 0)
    while len(bits) % 6:
        bits.append(0)
    chunks = []
    for p in range(0, len(bits), 6):
        val = 0
        for b in bits[p:p + 6]:
            val = (val << 1) | b
        chunks.append(chr(val + 63))
    text = _encode_size(n) + "".join(chunks)
    return HEADER + text if header else text


def parse_graph6(text: str) -> tuple[int, set[tuple[int, int]]]:
    """Decode a graph6 string to (vertex count, set of edges (i, j) with i < j)."""
    data = text.strip()
    if data.startswith(HEADER):
        data = data[len(HEADER):]
    n, body = _decode_size(data)
    need = n * (n - 1) // 2
    need_bytes = (need + 5) // 6
    if len(body) < need_bytes:
        raise DomainError(f"graph6 body too short: {len(body)} < {need_bytes} bytes")
    if len(body) > need_bytes:
        raise DomainError(f"graph6 body too long: {len(body)} > {need_bytes} bytes")
    bits = []
    for c in body:
        v = ord(c) - 63
        if v < 0 or v > 63:
            raise DomainError(f"bad graph6 body byte {c!r}")
        bits.extend((v >> s) & 1 for s in (5, 4, 3, 2, 1, 0))
    if any(bits[need:]):
        raise DomainError("nonzero padding in graph6 body")
    edges = set()
    p = 0
    for j in range(1, n):
        for i in range(j):
            if bits[p]:
                edges.add((i, j))
            p += 1
    return n, edges
