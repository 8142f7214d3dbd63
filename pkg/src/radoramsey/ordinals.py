"""Ordinals below omega^omega in Cantor normal form.

An ordinal is a finite map exponent -> positive coefficient, representing
sum of w^e * c over exponents in decreasing order.  This range covers every
rank the package computes (finite ranks and the cylinder ranks w^n).
"""

from __future__ import annotations

from .errors import DomainError


class OrdinalCNF:
    """Immutable ordinal below w^w in Cantor normal form."""

    __slots__ = ("terms",)

    def __init__(self, coefficients=None):
        terms = {}
        if coefficients:
            for e, c in dict(coefficients).items():
                if e < 0 or c < 0:
                    raise DomainError("exponents and coefficients must be naturals")
                if c:
                    terms[int(e)] = int(c)
        object.__setattr__(self, "terms", tuple(sorted(terms.items(), reverse=True)))

    def __setattr__(self, *_):
        raise AttributeError("OrdinalCNF is immutable")

    def __reduce__(self):
        return (OrdinalCNF, (dict(self.terms),))

    @classmethod
    def from_int(cls, n: int) -> "OrdinalCNF":
        return cls({0: n} if n else {})

    @classmethod
    def omega_power(cls, n: int) -> "OrdinalCNF":
        return cls({n: 1})

    def is_finite(self) -> bool:
        return all(e == 0 for e, _ in self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int):
            other = OrdinalCNF.from_int(other)
        return isinstance(other, OrdinalCNF) and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def _key(self):
        return self.terms

    def __lt__(self, other):
        if isinstance(other, int):
            other = OrdinalCNF.from_int(other)
        for (e1, c1), (e2, c2) in zip(self.terms, other.terms):
            if e1 != e2:
                return e1 < e2
            if c1 != c2:
                return c1 < c2
        return len(self.terms) < len(other.terms)

    def __le__(self, other):
        return self == other or self < other

    def __gt__(self, other):
        if isinstance(other, int):
            other = OrdinalCNF.from_int(other)
        return other < self

    def __ge__(self, other):
        return self == other or self > other

    def __add__(self, other) -> "OrdinalCNF":
        """Ordinal addition: lower-order terms of the left argument are absorbed."""
        if isinstance(other, int):
            other = OrdinalCNF.from_int(other)
        if not other.terms:
            return self
        head = other.terms[0][0]
        kept = {e: c for e, c in self.terms if e > head}
        out = dict(kept)
        for e, c in other.terms:
            out[e] = out.get(e, 0) + c
        lead = dict(self.terms).get(head, 0)
        if lead:
            out[head] += lead
        return OrdinalCNF(out)

    def __repr__(self):
        return f"OrdinalCNF({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms:
            if e == 0:
                parts.append(str(c))
            elif e == 1:
                parts.append("w" if c == 1 else f"w*{c}")
            else:
                parts.append(f"w^{e}" if c == 1 else f"w^{e}*{c}")
        return " + ".join(parts)

    def to_json(self):
        return {str(e): c for e, c in self.terms}


ZERO = OrdinalCNF()
ONE = OrdinalCNF.from_int(1)
OMEGA = OrdinalCNF.omega_power(1)
