"""Dense univariate polynomials over a finite field (constant term first)."""

from __future__ import annotations

from .fields import FieldElement, FiniteField


class Poly:
    """Immutable polynomial with FieldElement coefficients, constant first."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FiniteField, coeffs):
        cs = list(coeffs)
        while len(cs) > 1 and cs[-1].i == 0:
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs) if cs else (field.zero,)

    @classmethod
    def const(cls, field: FiniteField, c: FieldElement) -> "Poly":
        return cls(field, (c,))

    @classmethod
    def x(cls, field: FiniteField) -> "Poly":
        return cls(field, (field.zero, field.one))

    @property
    def degree(self) -> int:
        if len(self.coeffs) == 1 and self.coeffs[0].i == 0:
            return -1
        return len(self.coeffs) - 1

    def __add__(self, other: "Poly") -> "Poly":
        F = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] = out[k] + c
        return Poly(F, out)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __neg__(self) -> "Poly":
        return Poly(self.field, tuple(-c for c in self.coeffs))

    def __mul__(self, other: "Poly") -> "Poly":
        F = self.field
        a, b = self.coeffs, other.coeffs
        out = [F.zero] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai.i:
                for j, bj in enumerate(b):
                    if bj.i:
                        out[i + j] = out[i + j] + ai * bj
        return Poly(F, out)

    def scale(self, c: FieldElement) -> "Poly":
        return Poly(self.field, tuple(c * a for a in self.coeffs))

    def __call__(self, x: FieldElement) -> FieldElement:
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def divmod_linear(self, root: FieldElement) -> tuple["Poly", FieldElement]:
        """Divide by (X - root) synthetically; returns (quotient, remainder)."""
        out = []
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * root + c
            out.append(acc)
        rem = out.pop()
        # out currently holds quotient coefficients high-to-low shifted by acc chain
        q = list(reversed(out))
        return Poly(self.field, q or (self.field.zero,)), rem

    def root_multiplicity(self, root: FieldElement) -> int:
        m, cur = 0, self
        while cur.degree >= 1:
            q, r = cur.divmod_linear(root)
            if r.i != 0:
                break
            m += 1
            cur = q
        return m

    def map_coeffs(self, f, new_field: FiniteField) -> "Poly":
        return Poly(new_field, tuple(f(c) for c in self.coeffs))

    def roots_with_multiplicity(self) -> list[tuple[FieldElement, int]]:
        """All roots in the coefficient field, scanned exhaustively."""
        out = []
        cur = self
        for cand in self.field.elements:
            if cur.degree < 1:
                break
            m = 0
            while True:
                q, r = cur.divmod_linear(cand)
                if r.i != 0:
                    break
                m += 1
                cur = q
            if m:
                out.append((cand, m))
        return out

    def __eq__(self, other):
        return (isinstance(other, Poly) and other.field is self.field
                and other.coeffs == self.coeffs)

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c.i == 0 and not (k == 0 and len(terms) == 0 and self.degree < 0):
                continue
            cs = repr(c)
            if k == 0:
                terms.append(cs)
            else:
                head = "" if c == self.field.one else f"({cs})*"
                terms.append(f"{head}X" if k == 1 else f"{head}X^{k}")
        return " + ".join(terms) if terms else "0"
