"""Laurent polynomials in q and bigraded polynomials in t, q.

Coefficients are exact integers.  These are the output currency of the
homology computations (Poincare polynomials, graded Euler characteristics)
and of the closed-form oracles.
"""

from __future__ import annotations


class LaurentPoly:
    """Integer Laurent polynomial in the single variable q."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: dict[int, int] | None = None):
        self.coeffs = {e: c for e, c in (coeffs or {}).items() if c != 0}

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> "LaurentPoly":
        return cls({exp: coeff})

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls({})

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls({0: 1})

    @classmethod
    def q_plus_qinv(cls) -> "LaurentPoly":
        return cls({1: 1, -1: 1})

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, LaurentPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) - c
        return LaurentPoly(out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -c for e, c in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return LaurentPoly({e: c * other for e, c in self.coeffs.items()})
        out: dict[int, int] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            raise ValueError("negative power")
        out = LaurentPoly.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by q^k."""
        return LaurentPoly({e + k: c for e, c in self.coeffs.items()})

    def substitute_power(self, k: int) -> "LaurentPoly":
        """Substitute q -> q^k."""
        return LaurentPoly({e * k: c for e, c in self.coeffs.items()})

    def divide_int(self, m: int) -> "LaurentPoly":
        """Divide every coefficient by m, which must divide exactly."""
        out = {}
        for e, c in self.coeffs.items():
            if c % m:
                raise ValueError(f"coefficient {c} not divisible by {m}")
            out[e] = c // m
        return LaurentPoly(out)

    def items(self):
        return sorted(self.coeffs.items())

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for e, c in self.items():
            parts.append(_term(c, [("q", e)], first=not parts))
        return "".join(parts)

    __repr__ = __str__


class BiPolynomial:
    """Integer polynomial in t and q, both with Laurent exponents."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: dict[tuple[int, int], int] | None = None):
        self.coeffs = {k: c for k, c in (coeffs or {}).items() if c != 0}

    @classmethod
    def monomial(cls, i: int, j: int, coeff: int = 1) -> "BiPolynomial":
        return cls({(i, j): coeff})

    @classmethod
    def zero(cls) -> "BiPolynomial":
        return cls({})

    @classmethod
    def from_laurent(cls, p: LaurentPoly, t_exp: int = 0) -> "BiPolynomial":
        return cls({(t_exp, e): c for e, c in p.coeffs.items()})

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, BiPolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other: "BiPolynomial") -> "BiPolynomial":
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) + c
        return BiPolynomial(out)

    def __sub__(self, other: "BiPolynomial") -> "BiPolynomial":
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) - c
        return BiPolynomial(out)

    def __mul__(self, other):
        if isinstance(other, int):
            return BiPolynomial({k: c * other for k, c in self.coeffs.items()})
        out: dict[tuple[int, int], int] = {}
        for (i1, j1), c1 in self.coeffs.items():
            for (i2, j2), c2 in other.coeffs.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, 0) + c1 * c2
        return BiPolynomial(out)

    __rmul__ = __mul__

    def at_t_minus_one(self) -> LaurentPoly:
        out: dict[int, int] = {}
        for (i, j), c in self.coeffs.items():
            out[j] = out.get(j, 0) + c * (-1) ** (i % 2)
        return LaurentPoly(out)

    def items(self):
        return sorted(self.coeffs.items())

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for (i, j), c in self.items():
            parts.append(_term(c, [("t", i), ("q", j)], first=not parts))
        return "".join(parts)

    __repr__ = __str__


def _term(coeff: int, vars_exps: list[tuple[str, int]], first: bool) -> str:
    factors = [f"{v}^{e}" if e != 1 else v for v, e in vars_exps if e != 0]
    mag = abs(coeff)
    if mag != 1 or not factors:
        factors.insert(0, str(mag))
    body = "*".join(factors)
    if first:
        return body if coeff > 0 else "-" + body
    return (" + " if coeff > 0 else " - ") + body
