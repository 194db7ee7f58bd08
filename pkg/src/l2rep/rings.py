"""Finite local rings of length two over F_q: W_2(F_q) and F_q[t]/t^2.

Both rings are parametrised by a residue field F_q and a kind:

* ``witt2`` — truncated Witt vectors of length two.  Elements are coordinate
  pairs (a0, a1); the maximal ideal is generated by p itself and the ring has
  characteristic p^2.  In coordinates:

      (a0,a1) + (b0,b1) = (a0+b0, a1+b1 - sum_{i=1}^{p-1} (C(p,i)/p) a0^i b0^{p-i})
      (a0,a1) * (b0,b1) = (a0 b0, a0^p b1 + a1 b0^p)

* ``dual`` — dual numbers F_q[t]/t^2, characteristic p, componentwise addition,
  (a0,a1)*(b0,b1) = (a0 b0, a0 b1 + a1 b0).

In either case the maximal ideal is principal with square zero, reduction to
F_q is (a0,a1) -> a0, and the Teichmüller section a -> (a,0) is multiplicative
(for dual numbers it is even a ring homomorphism).  For q = p the Witt ring is
Z/p^2; the exhaustive isomorphism with Z/p^2 is the correctness oracle for the
coordinate laws and lives in the test-suite.

Elements are interned per ring, like field elements.
"""

from __future__ import annotations

from math import comb

from .errors import UsageError
from .fields import FieldElement, FiniteField

WITT = "witt2"
DUAL = "dual"
KINDS = (WITT, DUAL)


class RingElement:
    """Element of a :class:`LocalRing`, stored as a pair of field indices."""

    __slots__ = ("ring", "a0", "a1")

    def __init__(self, ring: "LocalRing", a0: int, a1: int):
        self.ring = ring
        self.a0 = a0
        self.a1 = a1

    def reduce(self) -> FieldElement:
        """Image in the residue field F_q."""
        return self.ring.field._objs[self.a0]

    def components(self) -> tuple[FieldElement, FieldElement]:
        F = self.ring.field
        return F._objs[self.a0], F._objs[self.a1]

    def is_unit(self) -> bool:
        return self.a0 != 0

    def __add__(self, other):
        r = self.ring
        return r._objs[r.add_v(self.a0, self.a1, other.a0, other.a1)]

    def __sub__(self, other):
        r = self.ring
        n0, n1 = r.neg_v(other.a0, other.a1)
        return r._objs[r.add_v(self.a0, self.a1, n0, n1)]

    def __neg__(self):
        r = self.ring
        n0, n1 = r.neg_v(self.a0, self.a1)
        return r._objs[n0 * r.field.q + n1]

    def __mul__(self, other):
        r = self.ring
        return r._objs[r.mul_v(self.a0, self.a1, other.a0, other.a1)]

    def __truediv__(self, other):
        return self * other.inverse()

    def inverse(self) -> "RingElement":
        r = self.ring
        i0, i1 = r.inv_v(self.a0, self.a1)
        return r._objs[i0 * r.field.q + i1]

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        acc, b = self.ring.one, self
        while k:
            if k & 1:
                acc = acc * b
            b = b * b
            k >>= 1
        return acc

    def __bool__(self):
        return self.a0 != 0 or self.a1 != 0

    def __eq__(self, other):
        if self is other:
            return True
        return (isinstance(other, RingElement) and other.ring is self.ring
                and other.a0 == self.a0 and other.a1 == self.a1)

    def __hash__(self):
        return self.a0 * self.ring.field.q + self.a1

    def __repr__(self):
        F = self.ring.field
        return f"({F._objs[self.a0]!r},{F._objs[self.a1]!r})"


class LocalRing:
    """W_2(F_q) or F_q[t]/t^2; interned per (field, kind) via :meth:`get`."""

    _registry: dict[tuple, "LocalRing"] = {}

    def __init__(self, field: FiniteField, kind: str):
        if kind not in KINDS:
            raise UsageError(f"unknown ring kind {kind!r}; expected one of {KINDS}")
        self.field = field
        self.kind = kind
        p, q = field.p, field.q
        self.size = q * q
        # Witt addition correction coefficients C(p,i)/p mod p, i = 1..p-1
        self._witt_c = tuple((comb(p, i) // p) % p for i in range(1, p))
        self._objs = tuple(
            RingElement(self, i // q, i % q) for i in range(q * q)
        )
        self.zero = self._objs[0]
        self.one = self._objs[q]  # (1, 0)
        self.prime_elem = self._objs[1]  # (0, 1): p for witt2, t for dual
        self.char = p * p if kind == WITT else p

    @classmethod
    def get(cls, field: FiniteField, kind: str) -> "LocalRing":
        key = (id(field), kind)
        inst = cls._registry.get(key)
        if inst is None:
            inst = cls(field, kind)
            cls._registry[key] = inst
        return inst

    # -- raw coordinate laws -------------------------------------------------

    def add_v(self, a0: int, a1: int, b0: int, b1: int) -> int:
        F = self.field
        c0 = F.add_i(a0, b0)
        c1 = F.add_i(a1, b1)
        if self.kind == WITT and a0 and b0:
            p = F.p
            # subtract sum_{i=1}^{p-1} c_i a0^i b0^{p-i}
            corr = 0
            ai = a0
            for i in range(1, p):
                ci = self._witt_c[i - 1]
                if ci:
                    term = F.mul_i(ai, F.pow_i(b0, p - i))
                    if ci != 1:
                        term = F.mul_i(term, ci)
                    corr = F.add_i(corr, term)
                ai = F.mul_i(ai, a0)
            c1 = F.add_i(c1, F.neg_i(corr))
        return c0 * F.q + c1

    def neg_v(self, a0: int, a1: int) -> tuple[int, int]:
        F = self.field
        n0 = F.neg_i(a0)
        n1 = F.neg_i(a1)
        if self.kind == WITT and a0:
            p = F.p
            # solve (a0,a1)+(n0,n1) = 0: n1 = -a1 + sum c_i a0^i n0^{p-i}
            corr = 0
            ai = a0
            for i in range(1, p):
                ci = self._witt_c[i - 1]
                if ci:
                    term = F.mul_i(ai, F.pow_i(n0, p - i))
                    if ci != 1:
                        term = F.mul_i(term, ci)
                    corr = F.add_i(corr, term)
                ai = F.mul_i(ai, a0)
            n1 = F.add_i(n1, corr)
        return n0, n1

    def mul_v(self, a0: int, a1: int, b0: int, b1: int) -> int:
        F = self.field
        c0 = F.mul_i(a0, b0)
        if self.kind == WITT:
            c1 = F.add_i(F.mul_i(F._frob[a0], b1), F.mul_i(a1, F._frob[b0]))
        else:
            c1 = F.add_i(F.mul_i(a0, b1), F.mul_i(a1, b0))
        return c0 * F.q + c1

    def inv_v(self, a0: int, a1: int) -> tuple[int, int]:
        F = self.field
        if a0 == 0:
            raise ZeroDivisionError("element is not a unit")
        b0 = F.inv_i(a0)
        if self.kind == WITT:
            # solve a0^p b1 + a1 b0^p = 0
            b1 = F.mul_i(F.neg_i(F.mul_i(a1, F._frob[b0])), F.inv_i(F._frob[a0]))
        else:
            b1 = F.mul_i(F.neg_i(a1), F.mul_i(b0, b0))
        return b0, b1

    # -- construction --------------------------------------------------------

    def elem(self, a0, a1=None) -> RingElement:
        """Element from field elements / coefficient data, or a single int via from_int."""
        if isinstance(a0, RingElement):
            if a0.ring is not self:
                raise UsageError("element belongs to a different ring")
            return a0
        if a1 is None:
            if isinstance(a0, int):
                return self.from_int(a0)
            if isinstance(a0, (tuple, list)) and len(a0) == 2:
                a0, a1 = a0
            else:
                raise UsageError("elem needs two components, a pair, or an int")
        e0 = self.field.elem(a0)
        e1 = self.field.elem(a1)
        return self._objs[e0.i * self.field.q + e1.i]

    def from_pair(self, i0: int, i1: int) -> RingElement:
        return self._objs[i0 * self.field.q + i1]

    def from_int(self, n: int) -> RingElement:
        """Image of the integer n under the unique ring map Z -> R."""
        p = self.field.p
        if self.kind == DUAL:
            return self.elem(n % p, 0)
        n %= p * p
        a0 = n % p
        teich = pow(a0, p, p * p)
        a1 = ((n - teich) // p) % p
        return self._objs[self.field.elem(a0).i * self.field.q + self.field.elem(a1).i]

    def teichmuller(self, a: FieldElement) -> RingElement:
        """The multiplicative section s(a) = (a, 0); s(0) = 0."""
        if a.field is not self.field:
            raise UsageError("element not in the residue field")
        return self._objs[a.i * self.field.q]

    @property
    def elements(self) -> tuple[RingElement, ...]:
        return self._objs

    def units(self):
        q = self.field.q
        return tuple(e for e in self._objs[q:])

    def __repr__(self):
        base = repr(self.field)
        return f"W2({base})" if self.kind == WITT else f"{base}[t]/t^2"
