"""Exact multivariate Laurent polynomials with rational coefficients.

Coefficients are :class:`fractions.Fraction`; exponents are integers and may
be negative.  The variable universe is fixed (``l, x, y, z, t, s, a, b, g``)
so that every polynomial has one canonical printed form: terms in graded-lex
descending order, ``^`` for powers, ``*`` between factors, e.g. ``-l^2 + 1``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

#: Fixed variable order used for canonical term sorting and printing.
VARIABLES = ("l", "x", "y", "z", "t", "s", "a", "b", "g")

_VAR_INDEX = {name: i for i, name in enumerate(VARIABLES)}
_NVARS = len(VARIABLES)
_ZERO_EXP = (0,) * _NVARS

Coefficient = Union[int, Fraction]


class LaurentPoly:
    """An immutable Laurent polynomial over the fixed variable universe.

    Terms are stored as a map from exponent vectors (tuples indexed by
    :data:`VARIABLES`) to nonzero ``Fraction`` coefficients.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[tuple, Coefficient] | None = None):
        clean = {}
        if terms:
            for exps, coef in terms.items():
                coef = Fraction(coef)
                if coef:
                    exps = tuple(exps)
                    if len(exps) != _NVARS:
                        raise ValueError("exponent vector has wrong length")
                    clean[exps] = clean.get(exps, Fraction(0)) + coef
            clean = {e: c for e, c in clean.items() if c}
        self._terms = clean
        self._hash = None

    # -- constructors ----------------------------------------------------

    @staticmethod
    def constant(value: Coefficient) -> "LaurentPoly":
        value = Fraction(value)
        return LaurentPoly({_ZERO_EXP: value} if value else {})

    @staticmethod
    def var(name: str, power: int = 1) -> "LaurentPoly":
        """The monomial ``name^power`` (power may be negative)."""
        if name not in _VAR_INDEX:
            raise ValueError(f"unknown variable {name!r}; expected one of {VARIABLES}")
        exps = [0] * _NVARS
        exps[_VAR_INDEX[name]] = power
        return LaurentPoly({tuple(exps): Fraction(1)})

    @staticmethod
    def monomial(powers: Mapping[str, int], coef: Coefficient = 1) -> "LaurentPoly":
        exps = [0] * _NVARS
        for name, p in powers.items():
            if name not in _VAR_INDEX:
                raise ValueError(f"unknown variable {name!r}")
            exps[_VAR_INDEX[name]] = p
        return LaurentPoly({tuple(exps): Fraction(coef)})

    # -- queries ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def constant_value(self) -> Fraction:
        """The value of a constant polynomial; error if non-constant."""
        if not self._terms:
            return Fraction(0)
        if len(self._terms) == 1 and _ZERO_EXP in self._terms:
            return self._terms[_ZERO_EXP]
        raise ValueError(f"not a constant polynomial: {self}")

    def terms(self) -> dict:
        return dict(self._terms)

    # -- arithmetic ------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.constant(other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        merged = dict(self._terms)
        for exps, coef in other._terms.items():
            merged[exps] = merged.get(exps, Fraction(0)) + coef
        return LaurentPoly(merged)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "LaurentPoly":
        return (-self) + other

    def __mul__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, power: int) -> "LaurentPoly":
        if not isinstance(power, int):
            raise TypeError("polynomial powers must be integers")
        if power < 0:
            # Only invertible elements (single terms) have negative powers.
            if len(self._terms) != 1:
                raise ValueError("negative power of a non-monomial")
            ((exps, coef),) = self._terms.items()
            inv = LaurentPoly({tuple(-e for e in exps): 1 / coef})
            return inv ** (-power)
        result = LaurentPoly.constant(1)
        base = self
        while power:
            if power & 1:
                result = result * base
            base = base * base
            power >>= 1
        return result

    def substitute(self, assignments: Mapping[str, "LaurentPoly | Coefficient"]) -> "LaurentPoly":
        """Replace each named variable by a polynomial value, exactly.

        A variable occurring with a negative exponent may only be replaced by
        an invertible value (a single-term monomial with nonzero coefficient).
        """
        values = {}
        for name, val in assignments.items():
            if name not in _VAR_INDEX:
                raise ValueError(f"unknown variable {name!r}")
            values[_VAR_INDEX[name]] = LaurentPoly._coerce(val)
        total = LaurentPoly()
        for exps, coef in self._terms.items():
            term = LaurentPoly.constant(coef)
            kept = [0] * _NVARS
            for i, e in enumerate(exps):
                if i in values:
                    if e:
                        term = term * (values[i] ** e)
                else:
                    kept[i] = e
            total = total + term * LaurentPoly({tuple(kept): 1})
        return total

    # -- comparison ------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    # -- printing --------------------------------------------------------

    @staticmethod
    def _sort_key(exps: tuple):
        return (sum(exps), exps)

    def _sorted_terms(self) -> Iterable[tuple]:
        return sorted(self._terms.items(), key=lambda kv: self._sort_key(kv[0]), reverse=True)

    @staticmethod
    def _format_coef(coef: Fraction) -> str:
        if coef.denominator == 1:
            return str(coef.numerator)
        return f"{coef.numerator}/{coef.denominator}"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for n, (exps, coef) in enumerate(self._sorted_terms()):
            factors = []
            for i, e in enumerate(exps):
                if e == 1:
                    factors.append(VARIABLES[i])
                elif e:
                    factors.append(f"{VARIABLES[i]}^{e}")
            mono = "*".join(factors)
            mag = abs(coef)
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{self._format_coef(mag)}*{mono}"
            else:
                body = self._format_coef(mag)
            if n == 0:
                pieces.append(body if coef > 0 else f"-{body}")
            else:
                pieces.append(f"+ {body}" if coef > 0 else f"- {body}")
        return " ".join(pieces)

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"


ZERO = LaurentPoly()
ONE = LaurentPoly.constant(1)
