"""
Truncated Laurent series in one parameter t.

A TSeries t^start * (c_0 + c_1 t + ... + c_{p-1} t^{p-1} + O(t^p)) carries
its relative precision p = len(coeffs); the absolute precision is start + p.
"""

from typing import Callable, List, Optional, Sequence


class TSeries:
    __slots__ = ("start", "coeffs")

    def __init__(self, start: int, coeffs: Sequence):
        self.start = start
        self.coeffs = list(coeffs)

    @classmethod
    def from_terms(cls, terms: dict, prec: int, zero=0) -> "TSeries":
        """Series of a finite Laurent polynomial {exponent: coefficient} up to absolute precision prec."""
        start = min(terms) if terms else prec
        start = min(start, prec)
        coeffs = [zero] * (prec - start)
        for e, c in terms.items():
            if e < prec:
                coeffs[e - start] = coeffs[e - start] + c
        return cls(start, coeffs)

    @classmethod
    def constant(cls, value, rel_prec: int) -> "TSeries":
        return cls(0, [value] + [value * 0] * (rel_prec - 1))

    @property
    def prec(self) -> int:
        return self.start + len(self.coeffs)

    def coefficient(self, exponent: int):
        """Coefficient of t^exponent (0 below start)."""
        if exponent >= self.prec:
            raise ValueError(f"t^{exponent} is beyond the precision O(t^{self.prec})")
        if exponent < self.start:
            return 0
        return self.coeffs[exponent - self.start]

    def truncate(self, rel_prec: int) -> "TSeries":
        return TSeries(self.start, self.coeffs[:max(rel_prec, 0)])

    def valuation(self, is_zero: Optional[Callable] = None) -> int:
        """Exponent of the first nonzero coefficient (prec if none)."""
        is_zero = is_zero or (lambda c: c == 0)
        for i, c in enumerate(self.coeffs):
            if not is_zero(c):
                return self.start + i
        return self.prec

    # =========================================================================
    # Arithmetic
    # =========================================================================

    def __add__(self, other) -> "TSeries":
        if not isinstance(other, TSeries):
            other = TSeries.constant(other, max(self.prec, 1))
        start = min(self.start, other.start)
        prec = min(self.prec, other.prec)
        coeffs = []
        for e in range(start, prec):
            a = self.coeffs[e - self.start] if e >= self.start else 0
            b = other.coeffs[e - other.start] if e >= other.start else 0
            coeffs.append(a + b)
        return TSeries(start, coeffs)

    __radd__ = __add__

    def __neg__(self) -> "TSeries":
        return TSeries(self.start, [-c for c in self.coeffs])

    def __sub__(self, other) -> "TSeries":
        return self + (-other if isinstance(other, TSeries) else -other)

    def __mul__(self, other) -> "TSeries":
        if not isinstance(other, TSeries):
            return TSeries(self.start, [c * other for c in self.coeffs])
        rel = min(len(self.coeffs), len(other.coeffs))
        a, b = self.coeffs, other.coeffs
        coeffs = []
        for m in range(rel):
            total = a[0] * b[m]
            for i in range(1, m + 1):
                total = total + a[i] * b[m - i]
            coeffs.append(total)
        return TSeries(self.start + other.start, coeffs)

    __rmul__ = __mul__

    def inverse(self) -> "TSeries":
        start, coeffs = self.start, list(self.coeffs)
        while coeffs and coeffs[0] == 0:
            start += 1
            coeffs.pop(0)
        if not coeffs:
            raise ZeroDivisionError("Series is zero to its precision")
        lead = coeffs[0]
        inv = [1 / lead]
        for m in range(1, len(coeffs)):
            total = coeffs[1] * inv[m - 1]
            for i in range(2, m + 1):
                total = total + coeffs[i] * inv[m - i]
            inv.append(-total / lead)
        return TSeries(-start, inv)

    def __pow__(self, k: int) -> "TSeries":
        if k < 0:
            return self.inverse() ** (-k)
        result = TSeries(0, [self.coeffs[0] ** 0 if self.coeffs else 1] + [0] * (len(self.coeffs) - 1))
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __repr__(self) -> str:
        return f"TSeries(t^{self.start} * {self.coeffs} + O(t^{self.prec}))"


def substitute(poly, components: List[TSeries], prec: int, convert: Callable = None,
               starts: Optional[Sequence[int]] = None, cache: Optional[dict] = None) -> TSeries:
    """Series of a SparsePoly evaluated on component series, to absolute precision prec.

    Each monomial is expanded only to the relative precision it can
    contribute below prec. Powers are memoized in cache when one is given.
    """
    starts = starts if starts is not None else [c.start for c in components]
    total: Optional[TSeries] = None
    for exp, coef in poly.terms.items():
        val = sum(e * s for e, s in zip(exp, starts))
        rel = prec - val
        if rel <= 0:
            continue
        term: Optional[TSeries] = None
        for series, e in zip(components, exp):
            if e == 0:
                continue
            key = (id(series), e, rel)
            if cache is not None and key in cache:
                factor = cache[key]
            else:
                factor = series.truncate(rel) ** e
                if cache is not None:
                    cache[key] = factor
            term = factor if term is None else term * factor
        value = convert(coef) if convert else coef
        term = TSeries(0, [value] + [value * 0] * (rel - 1)) if term is None else term * value
        term = term.truncate(prec - term.start)
        total = term if total is None else total + term
    if total is None:
        return TSeries(prec, [])
    return total
