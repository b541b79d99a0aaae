"""Exact degree fitting for integer sequences of polynomial type."""
from __future__ import annotations

from typing import Sequence

from .errors import InconclusiveFit

# degree of the zero polynomial; ordered below every integer
NEG_INFINITY = float("-inf")


def is_neg_inf(v) -> bool:
    return v == NEG_INFINITY


def fmt_degree(v):
    """JSON/CSV friendly form of a degree."""
    return "-inf" if v == NEG_INFINITY else int(v)


def parse_degree(v):
    return NEG_INFINITY if v in ("-inf", NEG_INFINITY) else int(v)


def differences(seq: Sequence[int]) -> list[int]:
    return [b - a for a, b in zip(seq, seq[1:])]


def exact_degree(seq: Sequence[int]):
    """Least degree D <= len(seq) - 2 of a polynomial through all points, or None.

    The all-zero sequence has degree NEG_INFINITY.
    """
    seq = list(seq)
    if not any(seq):
        return NEG_INFINITY
    cur = seq
    for D in range(0, len(seq) - 1):
        cur = differences(cur)
        if not any(cur):
            return D
    return None


def fit_degree(row: Sequence[int], burn_in: int = 0, info: dict | None = None):
    """Degree of the polynomial that eventually agrees with ``row``.

    Starting at index ``burn_in`` the window slides forward until the values
    on it fit a polynomial of degree at most (points - 2).  Raises
    InconclusiveFit when no window works.
    """
    row = list(row)
    for s in range(burn_in, len(row)):
        tail = row[s:]
        if len(tail) < 2 and any(tail):
            break
        D = exact_degree(tail)
        if D is not None:
            if info is not None:
                info["start"] = s
                info["points"] = len(tail)
            return D
    raise InconclusiveFit(f"no exact polynomial fit on {row[burn_in:]} (window too short)")
