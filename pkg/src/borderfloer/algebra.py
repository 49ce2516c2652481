"""Arithmetic in the genus-1 strands algebra over F2.

The algebra has eight basis elements: two idempotents i0, i1 and six
chords r1, r2, r3, r12, r23, r123.  A general element is an F2 sum of
basis elements, stored as an 8-bit mask (bit k set means basis element k
appears).  Addition is XOR; multiplication is bilinear over the basis
product table below.

Nonzero basis products:

    i0*i0 = i0          i1*i1 = i1
    r1*r2 = r12         r2*r3 = r23
    r1*r23 = r123       r12*r3 = r123
    iota*c = c if iota is the left idempotent of chord c
    c*iota = c if iota is the right idempotent of chord c

Everything else multiplies to zero.  The identity is i0 + i1.

Chord left/right idempotents (a chord starting on side 0 has left
idempotent i0, and so on):

    r1: (i0, i1)   r2: (i1, i0)   r3: (i0, i1)
    r12: (i0, i0)  r23: (i1, i1)  r123: (i0, i1)

The same table serves both boundary copies of the algebra; which copy a
chord belongs to is recorded by the side label of the structure using it,
not by the chord value.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence, Tuple

__all__ = [
    "I0", "I1", "R1", "R2", "R3", "R12", "R23", "R123",
    "BASIS_TOKENS", "CHORDS", "IDEMPOTENTS", "ZERO", "UNIT",
    "el", "mul", "mul_basis", "add",
    "chord_idempotents", "idempotent_of_side",
    "is_idempotent", "is_chord", "basis_elements",
    "parse_element", "format_element", "parse_chord", "format_chord",
    "parse_idempotent", "format_idempotent",
    "seq_is_composable", "seq_idempotents",
]

# Basis indices.  Idempotents first, then chords by start/span.
I0, I1, R1, R2, R3, R12, R23, R123 = range(8)

BASIS_TOKENS = ("i0", "i1", "r1", "r2", "r3", "r12", "r23", "r123")
_TOKEN_INDEX = {tok: k for k, tok in enumerate(BASIS_TOKENS)}

IDEMPOTENTS = (I0, I1)
CHORDS = (R1, R2, R3, R12, R23, R123)

# (left idempotent, right idempotent) of each chord.
_CHORD_IDEM = {
    R1: (I0, I1),
    R2: (I1, I0),
    R3: (I0, I1),
    R12: (I0, I0),
    R23: (I1, I1),
    R123: (I0, I1),
}

ZERO = 0
UNIT = (1 << I0) | (1 << I1)


def el(k: int) -> int:
    """The element with exactly basis index k, as a mask."""
    return 1 << k


def _build_table() -> Tuple[Tuple[int, ...], ...]:
    # Chord concatenations that survive.
    concat = {
        (R1, R2): R12,
        (R2, R3): R23,
        (R1, R23): R123,
        (R12, R3): R123,
    }
    table = [[0] * 8 for _ in range(8)]
    for a in range(8):
        for b in range(8):
            if a in IDEMPOTENTS and b in IDEMPOTENTS:
                if a == b:
                    table[a][b] = el(a)
            elif a in IDEMPOTENTS:
                if _CHORD_IDEM[b][0] == a:
                    table[a][b] = el(b)
            elif b in IDEMPOTENTS:
                if _CHORD_IDEM[a][1] == b:
                    table[a][b] = el(a)
            else:
                c = concat.get((a, b))
                if c is not None:
                    table[a][b] = el(c)
    return tuple(tuple(row) for row in table)


_MUL = _build_table()


def mul_basis(a: int, b: int) -> int:
    """Product of two basis indices, returned as a mask (possibly 0)."""
    return _MUL[a][b]


def mul(x: int, y: int) -> int:
    """Product of two masks, bilinear over F2."""
    out = 0
    xs = x
    while xs:
        a = (xs & -xs).bit_length() - 1
        xs &= xs - 1
        ys = y
        while ys:
            b = (ys & -ys).bit_length() - 1
            ys &= ys - 1
            out ^= _MUL[a][b]
    return out


def add(x: int, y: int) -> int:
    """Sum of two masks over F2."""
    return x ^ y


def chord_idempotents(c: int) -> Tuple[int, int]:
    """(left, right) idempotent indices of chord c."""
    return _CHORD_IDEM[c]


def idempotent_of_side(k: int, left: bool) -> int:
    """Left or right idempotent index of any basis element."""
    if k in IDEMPOTENTS:
        return k
    pair = _CHORD_IDEM[k]
    return pair[0] if left else pair[1]


def is_idempotent(k: int) -> bool:
    return k == I0 or k == I1


def is_chord(k: int) -> bool:
    return R1 <= k <= R123


def basis_elements(x: int) -> Tuple[int, ...]:
    """Basis indices appearing in mask x, ascending."""
    out = []
    while x:
        out.append((x & -x).bit_length() - 1)
        x &= x - 1
    return tuple(out)


def parse_element(text: str) -> int:
    """Parse a '+'-separated sum of basis tokens; '0' is zero, '1' the unit."""
    mask = 0
    for raw in text.split("+"):
        tok = raw.strip()
        if tok == "0":
            continue
        if tok == "1":
            mask ^= UNIT
            continue
        k = _TOKEN_INDEX.get(tok)
        if k is None:
            raise ValueError(f"unknown algebra token {tok!r}")
        mask ^= el(k)
    return mask


def format_element(x: int) -> str:
    if x == 0:
        return "0"
    if x == UNIT:
        return "1"
    return "+".join(BASIS_TOKENS[k] for k in basis_elements(x))


def parse_chord(tok: str) -> int:
    k = _TOKEN_INDEX.get(tok.strip())
    if k is None or not is_chord(k):
        raise ValueError(f"not a chord token: {tok!r}")
    return k


def format_chord(c: int) -> str:
    if not is_chord(c):
        raise ValueError(f"not a chord index: {c!r}")
    return BASIS_TOKENS[c]


def parse_idempotent(tok: str) -> int:
    k = _TOKEN_INDEX.get(tok.strip())
    if k is None or not is_idempotent(k):
        raise ValueError(f"not an idempotent token: {tok!r}")
    return k


def format_idempotent(i: int) -> str:
    if not is_idempotent(i):
        raise ValueError(f"not an idempotent index: {i!r}")
    return BASIS_TOKENS[i]


def seq_is_composable(seq: Sequence[int]) -> bool:
    """True when consecutive chords have matching inner idempotents."""
    for a, b in zip(seq, seq[1:]):
        if _CHORD_IDEM[a][1] != _CHORD_IDEM[b][0]:
            return False
    return True


def seq_idempotents(seq: Sequence[int]) -> Optional[Tuple[int, int]]:
    """(left, right) idempotents of a composable nonempty chord sequence.

    Returns None for an empty sequence (its idempotents are determined by
    context).  Raises ValueError on a non-composable sequence.
    """
    if not seq:
        return None
    if not seq_is_composable(seq):
        raise ValueError("chord sequence is not composable")
    return (_CHORD_IDEM[seq[0]][0], _CHORD_IDEM[seq[-1]][1])
