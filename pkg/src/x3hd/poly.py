"""Exact arithmetic on sparse polynomials in the formal variable u.

The coefficient of u^k counts ordered solution pairs at Hamming distance k,
so all arithmetic must stay exact: coefficients are Python integers and are
never rounded or truncated. Counts grow up to 4^n, hence no fixed-width type.
"""

from __future__ import annotations


class HDPoly:
    """Immutable sparse polynomial with nonnegative integer coefficients.

    Stored as a degree -> coefficient map with no zero entries; the zero
    polynomial is the empty map and has no degree.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: dict[int, int] | None = None):
        cleaned: dict[int, int] = {}
        if coeffs:
            for deg, coeff in coeffs.items():
                if deg < 0:
                    raise ValueError(f"negative degree {deg}")
                if coeff < 0:
                    raise ValueError(f"negative coefficient {coeff}")
                if coeff:
                    cleaned[deg] = coeff
        self._coeffs = cleaned

    @classmethod
    def zero(cls) -> "HDPoly":
        return cls()

    @classmethod
    def one(cls) -> "HDPoly":
        return cls({0: 1})

    @classmethod
    def u(cls) -> "HDPoly":
        return cls({1: 1})

    @classmethod
    def monomial(cls, coeff: int, degree: int) -> "HDPoly":
        return cls({degree: coeff})

    def coeff(self, degree: int) -> int:
        return self._coeffs.get(degree, 0)

    def degree(self) -> int | None:
        """Largest exponent with a nonzero coefficient; None for zero."""
        if not self._coeffs:
            return None
        return max(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    def total(self) -> int:
        """Sum of all coefficients (the number of counted pairs)."""
        return sum(self._coeffs.values())

    def terms(self) -> dict[int, int]:
        return dict(self._coeffs)

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def __add__(self, other: "HDPoly") -> "HDPoly":
        if not isinstance(other, HDPoly):
            return NotImplemented
        if not self._coeffs:
            return other
        if not other._coeffs:
            return self
        out = dict(self._coeffs)
        for deg, coeff in other._coeffs.items():
            out[deg] = out.get(deg, 0) + coeff
        return HDPoly(out)

    def __radd__(self, other):
        # lets sum() work with its default integer start value
        if other == 0:
            return self
        return NotImplemented

    def __mul__(self, other: "HDPoly") -> "HDPoly":
        if not isinstance(other, HDPoly):
            return NotImplemented
        if not self._coeffs or not other._coeffs:
            return HDPoly()
        a, b = self._coeffs, other._coeffs
        if len(a) > len(b):
            a, b = b, a
        out: dict[int, int] = {}
        for d1, c1 in a.items():
            for d2, c2 in b.items():
                d = d1 + d2
                out[d] = out.get(d, 0) + c1 * c2
        return HDPoly(out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HDPoly):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(tuple(sorted(self._coeffs.items())))

    def to_pairs(self) -> list[list]:
        """[degree, coefficient-as-decimal-string] pairs, ascending degree."""
        return [[deg, str(self._coeffs[deg])] for deg in sorted(self._coeffs)]

    def __str__(self) -> str:
        if not self._coeffs:
            return "0"
        parts = []
        for deg in sorted(self._coeffs, reverse=True):
            coeff = self._coeffs[deg]
            if deg == 0:
                parts.append(str(coeff))
            else:
                base = "u" if deg == 1 else f"u^{deg}"
                parts.append(base if coeff == 1 else f"{coeff}*{base}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"HDPoly({self})"


ZERO = HDPoly.zero()
ONE = HDPoly.one()
U = HDPoly.u()
