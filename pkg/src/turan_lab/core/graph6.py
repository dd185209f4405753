"""graph6 encoding and decoding (headerless form) through networkx.

networkx does the bit packing; the decoder is fronted by a scan that checks the
size prefix, the character range, the length and the padding, so malformed input
is reported with the offset of the offending byte.
"""

import logging
from collections.abc import Iterable

import networkx as nx

from .errors import Graph6ParseError
from .graph import Graph

logger = logging.getLogger(__name__)

_BIAS = 63
_MAX_CHAR = 126


def graph6_encode(g: Graph) -> str:
    """Encode ``g`` as one headerless graph6 string without the newline.

    Args:
        g: Graph on at most 64 vertices.

    Returns:
        The graph6 text; vertex order is the graph's own labelling.
    """
    return nx.to_graph6_bytes(g.to_networkx(), header=False).decode("ascii").rstrip("\n")


def _value_at(line: str, offset: int) -> int:
    if offset >= len(line):
        raise Graph6ParseError("truncated graph6 string", offset)
    code = ord(line[offset])
    if not _BIAS <= code <= _MAX_CHAR:
        raise Graph6ParseError(f"character {line[offset]!r} outside graph6 range", offset)
    return code - _BIAS


def _scan(line: str) -> None:
    """Reject what networkx would misread or report without a position."""
    if not line:
        raise Graph6ParseError("empty graph6 string", 0)
    if line.startswith(">>"):
        raise Graph6ParseError("graph6 headers are not supported", 0)

    first = _value_at(line, 0)
    if first == _MAX_CHAR - _BIAS:
        if len(line) > 1 and line[1] == "~":
            raise Graph6ParseError("8-byte size prefix is not supported", 1)
        n = 0
        for offset in (1, 2, 3):
            n = (n << 6) | _value_at(line, offset)
        pos = 4
    else:
        n, pos = first, 1

    total_bits = n * (n - 1) // 2
    needed = (total_bits + 5) // 6
    for offset in range(pos, min(len(line), pos + needed)):
        _value_at(line, offset)
    if len(line) < pos + needed:
        raise Graph6ParseError(f"bit vector needs {needed} characters, found {len(line) - pos}", len(line))
    if len(line) > pos + needed:
        raise Graph6ParseError("trailing data after graph6 bit vector", pos + needed)
    if needed:
        padding = 6 * needed - total_bits
        if _value_at(line, pos + needed - 1) & ((1 << padding) - 1):
            raise Graph6ParseError("nonzero padding bits", pos + needed - 1)


def graph6_decode(text: str) -> Graph:
    """Decode one graph6 line.

    Args:
        text: Headerless graph6 string; a single trailing newline is tolerated.

    Returns:
        The decoded graph.

    Raises:
        Graph6ParseError: On malformed input, with ``offset`` at the first bad byte.
    """
    line = text[:-1] if text.endswith("\n") else text
    _scan(line)
    try:
        nxg = nx.from_graph6_bytes(line.encode("ascii"))
    except (nx.NetworkXError, ValueError) as e:
        raise Graph6ParseError(f"networkx rejected graph6 string: {e}", 0) from e
    return Graph.from_networkx(nxg)


def parse_graph6_lines(text: str) -> list[Graph]:
    """Decode a corpus of LF-terminated graph6 lines, skipping blank lines."""
    graphs = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        try:
            graphs.append(graph6_decode(stripped))
        except Graph6ParseError as e:
            logger.error(f"graph6 corpus line {lineno}: {e}")
            raise
    return graphs


def format_graph6_lines(graphs: Iterable[Graph]) -> str:
    return "".join(graph6_encode(g) + "\n" for g in graphs)
