"""
Colorank Sequences - Finite sequences of naturals and their canonical encoding
"""

from typing import Iterable, Tuple

from .errors import ParseError

Seq = Tuple[int, ...]

EMPTY: Seq = ()


def encode_seq(s: Seq) -> str:
    """Dash-separated naturals, `e` for the empty sequence"""
    if not s:
        return "e"
    return "-".join(str(i) for i in s)


def parse_seq(text: str) -> Seq:
    text = text.strip()
    if text == "e":
        return EMPTY
    if not text:
        raise ParseError("empty sequence literal (use 'e')")
    try:
        values = tuple(int(part) for part in text.split("-"))
    except ValueError:
        raise ParseError(f"bad sequence literal '{text}'")
    if any(v < 0 for v in values):
        raise ParseError(f"negative entry in sequence '{text}'")
    return values


def parse_bits(text: str) -> Seq:
    """Binary strings like `0110`; `e` is the empty string"""
    text = text.strip()
    if text == "e":
        return EMPTY
    if not text or any(ch not in "01" for ch in text):
        raise ParseError(f"bad binary string '{text}'")
    return tuple(int(ch) for ch in text)


def encode_bits(s: Seq) -> str:
    return "".join(str(i) for i in s) if s else "e"


def restrict(s: Seq, n: int) -> Seq:
    return s[:n]


def is_prefix(a: Seq, b: Seq) -> bool:
    return len(a) <= len(b) and b[: len(a)] == a


def zeros(n: int) -> Seq:
    return (0,) * n


def constant(value: int, n: int) -> Seq:
    return (value,) * n


def restrict_all(items: Iterable[Seq], n: int) -> Tuple[Seq, ...]:
    return tuple(s[:n] for s in items)
