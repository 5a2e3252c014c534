"""Exact arithmetic substrate.

Everything downstream is built on four value types:

* ``int`` / ``Fraction`` -- arbitrary precision integers and reduced rationals
  (Python's built-ins already satisfy the required invariants).
* ``TauPoly`` -- sparse Laurent polynomials in a single variable ``tau`` with
  integer (or exact rational) coefficients.
* ``MultiPoly`` -- polynomials in u_1..u_n over ``TauPoly`` with a hard
  per-variable degree cap; products silently drop monomials beyond the cap,
  which is sound because callers only ever read coefficients within the cap.
* ``RingMatrix`` -- immutable rectangular matrices over any of the above,
  with fraction-free (Bareiss) determinants.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Coeff = Union[int, Fraction]


class ExactDivisionError(ArithmeticError):
    """Division in an integral domain left a nonzero remainder."""


class DimensionError(ValueError):
    """Matrix or exponent-vector dimensions do not match."""


class CapError(ValueError):
    """Requested exponent lies outside a MultiPoly's declared cap."""


def _norm_coeff(c: Coeff) -> Coeff:
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


def coeff_str(c: Coeff) -> str:
    """Decimal string for integers, "p/q" for non-integer rationals."""
    c = _norm_coeff(c)
    if isinstance(c, int):
        return str(c)
    return f"{c.numerator}/{c.denominator}"


def coeff_from_str(s: str) -> Coeff:
    if "/" in s:
        return _norm_coeff(Fraction(s))
    return int(s)


class TauPoly:
    """Sparse Laurent polynomial in tau.

    Stored as a map from integer exponent (possibly negative) to a nonzero
    coefficient.  Instances are immutable by convention: no public method
    mutates ``terms`` after construction, so values can be shared freely.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, Coeff] | None = None):
        clean: dict[int, Coeff] = {}
        if terms:
            for e, c in terms.items():
                c = _norm_coeff(c)
                if c:
                    clean[int(e)] = c
        self.terms = clean

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls) -> "TauPoly":
        return cls()

    @classmethod
    def one(cls) -> "TauPoly":
        return cls({0: 1})

    @classmethod
    def tau(cls) -> "TauPoly":
        return cls({1: 1})

    @classmethod
    def monomial(cls, exponent: int, coefficient: Coeff = 1) -> "TauPoly":
        return cls({exponent: coefficient})

    @classmethod
    def from_coeff(cls, c: Coeff) -> "TauPoly":
        return cls({0: c})

    # -- predicates and accessors -----------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self.terms == {0: 1}

    def coefficient(self, exponent: int) -> Coeff:
        return self.terms.get(exponent, 0)

    def min_exp(self) -> int:
        if not self.terms:
            raise ValueError("zero polynomial has no minimal exponent")
        return min(self.terms)

    def max_exp(self) -> int:
        if not self.terms:
            raise ValueError("zero polynomial has no maximal exponent")
        return max(self.terms)

    def as_unit(self) -> tuple[int, Coeff] | None:
        """(exponent, coefficient) if this is c*tau^e with c in {1,-1}, else None."""
        if len(self.terms) != 1:
            return None
        ((e, c),) = self.terms.items()
        if c == 1 or c == -1:
            return e, c
        return None

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.terms.values())

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "TauPoly") -> "TauPoly":
        if not isinstance(other, TauPoly):
            return NotImplemented
        if not self.terms:
            return other
        if not other.terms:
            return self
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = _norm_coeff(s)
            else:
                out.pop(e, None)
        res = TauPoly.__new__(TauPoly)
        res.terms = out
        return res

    def __sub__(self, other: "TauPoly") -> "TauPoly":
        if not isinstance(other, TauPoly):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> "TauPoly":
        res = TauPoly.__new__(TauPoly)
        res.terms = {e: -c for e, c in self.terms.items()}
        return res

    def __mul__(self, other: Union["TauPoly", Coeff]) -> "TauPoly":
        if isinstance(other, (int, Fraction)):
            other = _norm_coeff(other)
            if not other:
                return TauPoly.zero()
            res = TauPoly.__new__(TauPoly)
            res.terms = {e: _norm_coeff(c * other) for e, c in self.terms.items()}
            return res
        if not isinstance(other, TauPoly):
            return NotImplemented
        if not self.terms or not other.terms:
            return TauPoly.zero()
        if len(self.terms) > len(other.terms):
            self, other = other, self
        out: dict[int, Coeff] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        res = TauPoly.__new__(TauPoly)
        res.terms = {e: _norm_coeff(c) for e, c in out.items() if c}
        return res

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "TauPoly":
        if n < 0:
            unit = self.as_unit()
            if unit is None:
                raise ExactDivisionError("negative power of a non-unit")
            e, c = unit
            return TauPoly.monomial(e * n, c if n % 2 else 1)
        out = TauPoly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, k: int) -> "TauPoly":
        """Multiply by tau^k."""
        res = TauPoly.__new__(TauPoly)
        res.terms = {e + k: c for e, c in self.terms.items()}
        return res

    def exact_div(self, other: "TauPoly") -> "TauPoly":
        """Exact quotient self/other; raises ExactDivisionError on remainder."""
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero():
            return TauPoly.zero()
        # normalise both to ordinary polynomials with nonzero constant term
        ms, mo = self.min_exp(), other.min_exp()
        num = {e - ms: c for e, c in self.terms.items()}
        den = {e - mo: c for e, c in other.terms.items()}
        dmax = max(den)
        nmax = max(num)
        lead = den[dmax]
        quot: dict[int, Coeff] = {}
        # long division from the top exponent down
        work = dict(num)
        deg = nmax
        while work:
            deg = max(work)
            if deg < dmax:
                raise ExactDivisionError("nonzero remainder in TauPoly division")
            c = Fraction(work[deg], lead) if lead not in (1, -1) else work[deg] * lead
            if isinstance(c, Fraction):
                c = _norm_coeff(c)
            q = deg - dmax
            quot[q] = c
            for e, d in den.items():
                s = work.get(e + q, 0) - c * d
                if s:
                    work[e + q] = s
                else:
                    work.pop(e + q, None)
        return TauPoly({e + ms - mo: c for e, c in quot.items()})

    # -- evaluation and display --------------------------------------------

    def evaluate(self, x: Coeff) -> Coeff:
        """Exact value at tau = x (x nonzero if negative exponents occur)."""
        total: Coeff = 0
        x = Fraction(x)
        for e, c in self.terms.items():
            total += c * x**e
        return _norm_coeff(Fraction(total))

    def at_tau_one(self) -> Coeff:
        return _norm_coeff(sum(self.terms.values(), start=Fraction(0)))

    def substitute(self, value: "TauPoly") -> "TauPoly":
        """Compose: replace tau by another TauPoly (a unit if negative exponents occur)."""
        out = TauPoly.zero()
        for e, c in self.terms.items():
            out = out + value**e * c
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, TauPoly):
            return self.terms == other.terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms):
            c = self.terms[e]
            if e == 0:
                parts.append(coeff_str(c))
                continue
            var = "tau" if e == 1 else f"tau^{e}"
            if c == 1:
                parts.append(var)
            elif c == -1:
                parts.append(f"-{var}")
            else:
                parts.append(f"{coeff_str(c)}*{var}")
        s = " + ".join(parts)
        return s.replace("+ -", "- ")

    # -- shared JSON schema --------------------------------------------------

    def to_json(self) -> dict:
        ring = "Z[tau,tau^-1]" if self.is_integral() else "Q[tau,tau^-1]"
        return {
            "ring": ring,
            "terms": [[e, coeff_str(self.terms[e])] for e in sorted(self.terms)],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "TauPoly":
        return cls({int(e): coeff_from_str(c) for e, c in obj["terms"]})


def tau_qnumber(k: int) -> TauPoly:
    """The q-number [k] rewritten in tau = -(q + 1/q).

    Satisfies [0] = 0, [1] = 1 and the ladder [k+1] = -tau*[k] - [k-1].
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    prev, cur = TauPoly.zero(), TauPoly.one()
    if k == 0:
        return prev
    neg_tau = TauPoly.monomial(1, -1)
    for _ in range(k - 1):
        prev, cur = cur, neg_tau * cur - prev
    return cur


class MultiPoly:
    """Polynomial in u_1..u_n over TauPoly with per-variable degree caps.

    Multiplication silently discards monomials whose exponent in any variable
    exceeds the cap; coefficients at exponents within cap are exact.
    """

    __slots__ = ("n", "cap", "terms")

    def __init__(self, n: int, cap: Sequence[int], terms: Mapping[tuple, TauPoly] | None = None):
        if len(cap) != n:
            raise DimensionError("cap vector length must equal variable count")
        self.n = n
        self.cap = tuple(int(c) for c in cap)
        clean: dict[tuple, TauPoly] = {}
        if terms:
            for ev, p in terms.items():
                ev = tuple(int(e) for e in ev)
                if len(ev) != n:
                    raise DimensionError("exponent vector arity mismatch")
                if any(e < 0 for e in ev):
                    raise CapError("negative exponent")
                if any(e > c for e, c in zip(ev, self.cap)):
                    raise CapError("exponent beyond cap")
                if not p.is_zero():
                    clean[ev] = p
        self.terms = clean

    @classmethod
    def constant(cls, n: int, cap: Sequence[int], value: TauPoly) -> "MultiPoly":
        return cls(n, cap, {(0,) * n: value})

    @classmethod
    def one(cls, n: int, cap: Sequence[int]) -> "MultiPoly":
        return cls.constant(n, cap, TauPoly.one())

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        if self.n != other.n or self.cap != other.cap:
            raise DimensionError("mismatched MultiPoly shapes")
        out = dict(self.terms)
        for ev, p in other.terms.items():
            s = out.get(ev)
            s = p if s is None else s + p
            if s.is_zero():
                out.pop(ev, None)
            else:
                out[ev] = s
        res = MultiPoly.__new__(MultiPoly)
        res.n, res.cap, res.terms = self.n, self.cap, out
        return res

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        if self.n != other.n or self.cap != other.cap:
            raise DimensionError("mismatched MultiPoly shapes")
        cap = self.cap
        out: dict[tuple, TauPoly] = {}
        for ev1, p1 in self.terms.items():
            for ev2, p2 in other.terms.items():
                ev = tuple(a + b for a, b in zip(ev1, ev2))
                if any(e > c for e, c in zip(ev, cap)):
                    continue
                prod = p1 * p2
                s = out.get(ev)
                s = prod if s is None else s + prod
                if s.is_zero():
                    out.pop(ev, None)
                else:
                    out[ev] = s
        res = MultiPoly.__new__(MultiPoly)
        res.n, res.cap, res.terms = self.n, self.cap, out
        return res

    def __eq__(self, other: object) -> bool:
        if isinstance(other, MultiPoly):
            return self.n == other.n and self.terms == other.terms
        return NotImplemented

    def __repr__(self) -> str:
        return f"MultiPoly(n={self.n}, terms={len(self.terms)})"


def coeff_extract(p: MultiPoly, e: Sequence[int]) -> TauPoly:
    """Coefficient of u^e in p; e must lie within p's declared cap."""
    ev = tuple(int(x) for x in e)
    if len(ev) != p.n:
        raise DimensionError(f"exponent arity {len(ev)} != variable count {p.n}")
    if any(x < 0 for x in ev):
        raise CapError("negative exponent requested")
    if any(x > c for x, c in zip(ev, p.cap)):
        raise CapError(f"exponent {ev} beyond cap {p.cap}")
    return p.terms.get(ev, TauPoly.zero())


class RingMatrix:
    """Immutable rectangular matrix over TauPoly or exact rationals."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Iterable[Iterable]):
        rows = tuple(tuple(row) for row in entries)
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise DimensionError("ragged rows")
        else:
            width = 0
        self.rows = len(rows)
        self.cols = width
        self.entries = rows

    def __getitem__(self, idx: tuple[int, int]):
        i, j = idx
        return self.entries[i][j]

    def is_square(self) -> bool:
        return self.rows == self.cols

    def row(self, i: int) -> tuple:
        return self.entries[i]

    def with_rows(self, new_rows: Sequence[Sequence]) -> "RingMatrix":
        return RingMatrix(new_rows)

    def __repr__(self) -> str:
        return f"RingMatrix({self.rows}x{self.cols})"


def _is_zero(x) -> bool:
    if isinstance(x, TauPoly):
        return x.is_zero()
    return x == 0


def _exact_div(a, b):
    if isinstance(a, TauPoly) or isinstance(b, TauPoly):
        if not isinstance(a, TauPoly):
            a = TauPoly.from_coeff(a)
        if not isinstance(b, TauPoly):
            b = TauPoly.from_coeff(b)
        return a.exact_div(b)
    if isinstance(a, Fraction) or isinstance(b, Fraction):
        return _norm_coeff(Fraction(a) / Fraction(b))
    q, r = divmod(a, b)
    if r:
        raise ExactDivisionError("nonzero integer remainder")
    return q


def det(m: RingMatrix) -> TauPoly | Coeff:
    """Exact determinant by fraction-free Bareiss elimination.

    The 0x0 determinant is 1 (empty product).  Every interior division is
    asserted exact; a nonzero remainder indicates corrupted input, never a
    valid state.
    """
    if not m.is_square():
        raise DimensionError("determinant of a non-square matrix")
    n = m.rows
    if n == 0:
        return TauPoly.one()
    a = [list(row) for row in m.entries]
    sign = 1
    prev = None
    for k in range(n - 1):
        if _is_zero(a[k][k]):
            for i in range(k + 1, n):
                if not _is_zero(a[i][k]):
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                zero = TauPoly.zero() if isinstance(a[k][k], TauPoly) else 0
                return zero
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                elt = a[k][k] * a[i][j] - a[i][k] * a[k][j]
                if prev is not None:
                    elt = _exact_div(elt, prev)
                a[i][j] = elt
        prev = a[k][k]
    result = a[n - 1][n - 1]
    if sign < 0:
        result = -result
    return result


def det_cofactor(m: RingMatrix) -> TauPoly | Coeff:
    """Determinant by cofactor expansion; cross-check path for small sizes."""
    if not m.is_square():
        raise DimensionError("determinant of a non-square matrix")
    n = m.rows
    if n == 0:
        return TauPoly.one()

    def rec(rows: tuple) -> object:
        if len(rows) == 1:
            return rows[0][0]
        total = None
        for j in range(len(rows)):
            minor = tuple(r[:j] + r[j + 1 :] for r in rows[1:])
            term = rows[0][j] * rec(minor)
            if j % 2:
                term = -term
            total = term if total is None else total + term
        return total

    return rec(m.entries)


def pluecker_check(a: RingMatrix, b: RingMatrix) -> bool:
    """Row-exchange determinant identity for a pair of same-size square matrices.

    |A||B| must equal the sum over j of |A_1..A_{n-1}, B_j| times
    |B_1..B_{j-1}, A_n, B_{j+1}..B_n|; returns whether it holds exactly.
    """
    if not (a.is_square() and b.is_square()):
        raise DimensionError("both matrices must be square")
    if a.rows != b.rows:
        raise DimensionError("matrices must have equal size")
    n = a.rows
    lhs = det(a) * det(b)
    rhs = None
    for j in range(n):
        left = RingMatrix(a.entries[: n - 1] + (b.entries[j],))
        right = RingMatrix(b.entries[:j] + (a.entries[n - 1],) + b.entries[j + 1 :])
        term = det(left) * det(right)
        rhs = term if rhs is None else rhs + term
    if isinstance(lhs, TauPoly) or isinstance(rhs, TauPoly):
        if not isinstance(lhs, TauPoly):
            lhs = TauPoly.from_coeff(lhs)
        if not isinstance(rhs, TauPoly):
            rhs = TauPoly.from_coeff(rhs)
    return lhs == rhs
