"""Exact arithmetic in finite fields F_{p^f}.

A field is represented by an interned :class:`FiniteField` object holding
lookup tables; elements are interned :class:`FieldElement` objects carrying an
integer index ``i`` that encodes the coefficient vector (c_0, ..., c_{f-1}) of
the residue modulo the defining polynomial as i = sum c_k p^k.  All arithmetic
is table-driven and exact; there is no floating point anywhere.

The defining modulus is a monic irreducible polynomial of degree f over F_p,
given as a coefficient list with the constant term first.  Construction checks
irreducibility by trial division, so an invalid modulus fails loudly.

Multiplication uses discrete-log tables over a primitive element, which keeps
setup O(q) instead of O(q^2); addition is digitwise mod p with a small table
for the field sizes that actually occur here.
"""

from __future__ import annotations

from .errors import UsageError

_ADD_TABLE_LIMIT = 512  # build a full q*q addition table below this size


# ---------------------------------------------------------------------------
# raw polynomial helpers over Z/p (coefficient tuples, constant term first)
# used only during field construction, before tables exist

def _trim(c: tuple[int, ...]) -> tuple[int, ...]:
    n = len(c)
    while n > 1 and c[n - 1] == 0:
        n -= 1
    return c[:n]


def _poly_mulmod(a, b, modulus, p):
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    return _poly_mod(tuple(prod), modulus, p)


def _poly_mod(a, modulus, p):
    # modulus monic; synthetic division
    a = list(a)
    d = len(modulus) - 1
    while len(a) > d:
        lead = a[-1]
        if lead:
            shift = len(a) - 1 - d
            for k in range(d):
                a[shift + k] = (a[shift + k] - lead * modulus[k]) % p
        a.pop()
    while len(a) < d:
        a.append(0)
    return tuple(a)


def _poly_divides(div, a, p):
    """Whether monic div divides a over Z/p."""
    r = list(a)
    dd = len(div) - 1
    while len(r) - 1 >= dd:
        lead = r[-1]
        if lead:
            shift = len(r) - 1 - dd
            for k in range(dd + 1):
                r[shift + k] = (r[shift + k] - lead * div[k]) % p
        r.pop()
        while len(r) > 1 and r[-1] == 0:
            r.pop()
        if len(r) == 1 and r[0] == 0:
            return True
    return all(c == 0 for c in r)


def _monic_polys(degree, p):
    for idx in range(p ** degree):
        coeffs = []
        v = idx
        for _ in range(degree):
            coeffs.append(v % p)
            v //= p
        yield tuple(coeffs) + (1,)


def is_irreducible(modulus: tuple[int, ...], p: int) -> bool:
    """Trial-division irreducibility over F_p; fine for the tiny degrees used."""
    modulus = _trim(tuple(c % p for c in modulus))
    d = len(modulus) - 1
    if d < 1 or modulus[-1] != 1:
        return False
    if d == 1:
        return True
    for k in range(1, d // 2 + 1):
        for div in _monic_polys(k, p):
            if _poly_divides(div, modulus, p):
                return False
    return True


def default_modulus(p: int, f: int) -> tuple[int, ...]:
    """First monic irreducible of degree f over F_p in lexicographic coefficient order."""
    if f == 1:
        return (0, 1)
    for cand in _monic_polys(f, p):
        if is_irreducible(cand, p):
            return cand
    raise UsageError(f"no irreducible polynomial of degree {f} over F_{p}")  # pragma: no cover


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


class FieldElement:
    """An element of a :class:`FiniteField`; immutable, hashable, interned."""

    __slots__ = ("field", "i")

    def __init__(self, field: "FiniteField", i: int):
        self.field = field
        self.i = i

    @property
    def coeffs(self) -> tuple[int, ...]:
        """Coefficient vector over Z/p, constant term first, length f."""
        return self.field._digits[self.i]

    def is_unit(self) -> bool:
        return self.i != 0

    def frobenius(self) -> "FieldElement":
        return self.field._objs[self.field._frob[self.i]]

    def frobenius_inverse(self) -> "FieldElement":
        return self.field._objs[self.field._frob_inv[self.i]]

    def absolute_trace(self) -> int:
        """Tr_{F_q/F_p} as an integer in 0..p-1."""
        return self.field._trace[self.i]

    def __add__(self, other):
        return self.field._objs[self.field.add_i(self.i, other.i)]

    def __sub__(self, other):
        return self.field._objs[self.field.add_i(self.i, self.field._neg[other.i])]

    def __neg__(self):
        return self.field._objs[self.field._neg[self.i]]

    def __mul__(self, other):
        return self.field._objs[self.field.mul_i(self.i, other.i)]

    def __truediv__(self, other):
        return self.field._objs[self.field.mul_i(self.i, self.field.inv_i(other.i))]

    def __pow__(self, k: int):
        return self.field._objs[self.field.pow_i(self.i, k)]

    def __bool__(self):
        return self.i != 0

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, FieldElement) and other.field is self.field and other.i == self.i

    def __hash__(self):
        return self.i

    def __repr__(self):
        f = self.field
        if f.f == 1:
            return str(self.i)
        terms = []
        for k in range(f.f - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            if k == 0:
                terms.append(str(c))
            else:
                head = "" if c == 1 else str(c) + "*"
                terms.append(f"{head}u" if k == 1 else f"{head}u^{k}")
        return "+".join(terms) if terms else "0"


class FiniteField:
    """F_{p^f} with table-backed exact arithmetic.  Use :meth:`get` to intern."""

    _registry: dict[tuple, "FiniteField"] = {}

    def __init__(self, p: int, f: int = 1, modulus: tuple[int, ...] | None = None):
        if not _is_prime(p):
            raise UsageError(f"p = {p} is not prime")
        if f < 1:
            raise UsageError(f"extension degree f = {f} must be positive")
        if modulus is None:
            modulus = default_modulus(p, f)
        modulus = _trim(tuple(c % p for c in modulus))
        if len(modulus) - 1 != f:
            raise UsageError(f"modulus degree {len(modulus)-1} does not match f = {f}")
        if not is_irreducible(modulus, p):
            raise UsageError(f"modulus {list(modulus)} is reducible over F_{p}")
        self.p = p
        self.f = f
        self.q = p ** f
        self.modulus = modulus
        self._build_tables()
        self._objs = tuple(FieldElement(self, i) for i in range(self.q))
        self.zero = self._objs[0]
        self.one = self._objs[1]

    @classmethod
    def get(cls, p: int, f: int = 1, modulus=None) -> "FiniteField":
        if modulus is not None:
            modulus = _trim(tuple(int(c) % p for c in modulus))
        key = (p, f, modulus)
        inst = cls._registry.get(key)
        if inst is None:
            inst = cls(p, f, modulus)
            cls._registry[key] = inst
            # also register under the explicit modulus so both spellings intern
            cls._registry[(p, f, inst.modulus)] = inst
        return inst

    # -- table construction --------------------------------------------------

    def _build_tables(self):
        p, f, q = self.p, self.f, self.q
        digits = []
        for i in range(q):
            v, ds = i, []
            for _ in range(f):
                ds.append(v % p)
                v //= p
            digits.append(tuple(ds))
        self._digits = tuple(digits)

        def enc(c):
            v = 0
            for k in range(f - 1, -1, -1):
                v = v * p + c[k]
            return v

        self._enc = enc
        self._neg = tuple(enc(tuple((-c) % p for c in digits[i])) for i in range(q))

        if q <= _ADD_TABLE_LIMIT:
            self._addt = tuple(
                tuple(enc(tuple((a + b) % p for a, b in zip(digits[i], digits[j])))
                      for j in range(q))
                for i in range(q)
            )
        else:  # pragma: no cover - not hit at desk scale
            self._addt = None

        # discrete-log tables over a primitive element
        def raw_mul(i, j):
            return enc(_poly_mulmod(digits[i], digits[j], self.modulus, p))

        def raw_pow(i, k):
            r, b = 1, i
            while k:
                if k & 1:
                    r = raw_mul(r, b)
                b = raw_mul(b, b)
                k >>= 1
            return r

        order = q - 1
        gen = None
        prime_parts = _prime_factors(order) if order > 1 else []
        for cand in range(1, q):
            if order == 1 or all(raw_pow(cand, order // r) != 1 for r in prime_parts):
                gen = cand
                break
        assert gen is not None
        exp = [1] * max(order, 1)
        for k in range(1, order):
            exp[k] = raw_mul(exp[k - 1], gen)
        log = [0] * q
        for k, v in enumerate(exp):
            log[v] = k
        self._exp, self._log, self.generator_index = tuple(exp), tuple(log), gen

        self._frob = tuple(self.pow_i(i, p) for i in range(q))
        frob_inv = [0] * q
        for i in range(q):
            frob_inv[self._frob[i]] = i
        self._frob_inv = tuple(frob_inv)

        trace = []
        for i in range(q):
            t, a = 0, i
            for _ in range(f):
                t = self.add_i(t, a)
                a = self._frob[a]
            assert t < self.p, "trace must land in the prime subfield"
            trace.append(t)
        self._trace = tuple(trace)

    # -- raw index ops (used by elements and by R2 arithmetic) ---------------

    def add_i(self, a: int, b: int) -> int:
        if self._addt is not None:
            return self._addt[a][b]
        p = self.p  # pragma: no cover
        return self._enc(tuple((x + y) % p for x, y in zip(self._digits[a], self._digits[b])))

    def neg_i(self, a: int) -> int:
        return self._neg[a]

    def mul_i(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        n = self._log[a] + self._log[b]
        o = self.q - 1
        if n >= o:
            n -= o
        return self._exp[n]

    def inv_i(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in " + repr(self))
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def pow_i(self, a: int, k: int) -> int:
        if a == 0:
            if k == 0:
                return 1
            if k < 0:
                raise ZeroDivisionError("negative power of 0")
            return 0
        return self._exp[(self._log[a] * k) % (self.q - 1)]

    # -- element construction ------------------------------------------------

    def from_index(self, i: int) -> FieldElement:
        return self._objs[i]

    def elem(self, value) -> FieldElement:
        """Build an element from an int (image of Z -> F_q) or a coefficient list."""
        if isinstance(value, FieldElement):
            if value.field is not self:
                raise UsageError("element belongs to a different field")
            return value
        if isinstance(value, int):
            return self._objs[value % self.p]
        coeffs = tuple(int(c) % self.p for c in value)
        if len(coeffs) > self.f:
            coeffs = _poly_mod(coeffs, self.modulus, self.p)
        coeffs = coeffs + (0,) * (self.f - len(coeffs))
        return self._objs[self._enc(coeffs)]

    def __call__(self, value) -> FieldElement:
        return self.elem(value)

    @property
    def elements(self) -> tuple[FieldElement, ...]:
        return self._objs

    def units(self):
        return self._objs[1:]

    @property
    def generator(self) -> FieldElement:
        return self._objs[self.generator_index]

    def __repr__(self):
        if self.f == 1:
            return f"F{self.p}"
        return f"F{self.q}=F{self.p}[u]/{list(self.modulus)}"


class FieldEmbedding:
    """A field homomorphism F -> K given by an index table; always injective."""

    __slots__ = ("src", "dst", "table")

    def __init__(self, src: FiniteField, dst: FiniteField, table: tuple[int, ...]):
        self.src = src
        self.dst = dst
        self.table = table

    def __call__(self, e: FieldElement) -> FieldElement:
        if e.field is not self.src:
            raise UsageError("element not in the embedding's source field")
        return self.dst._objs[self.table[e.i]]


def extend_field(F: FiniteField, m: int) -> tuple[FiniteField, FieldEmbedding]:
    """F_{q^m} together with the canonical embedding of F = F_q.

    The big field is realised over the prime field with its default modulus; the
    embedding sends the generator of F to the first root (in index order) of F's
    modulus in the big field, which pins the map deterministically.
    """
    if m < 1:
        raise UsageError("extension degree must be >= 1")
    if m == 1:
        return F, FieldEmbedding(F, F, tuple(range(F.q)))
    K = FiniteField.get(F.p, F.f * m)
    # evaluate F.modulus at each element of K to find a root
    root = None
    mod_in_K = [K.elem(c) for c in F.modulus]
    for cand in K.elements:
        acc = K.zero
        for c in reversed(mod_in_K):
            acc = acc * cand + c
        if acc.i == 0:
            root = cand
            break
    if root is None:  # pragma: no cover
        raise UsageError(f"{F!r} does not embed in {K!r}; modulus has no root there")
    table = []
    for i in range(F.q):
        acc = K.zero
        for c in reversed(F._digits[i]):
            acc = acc * root + K.elem(c)
        table.append(acc.i)
    emb = FieldEmbedding(F, K, tuple(table))
    # sanity: must be a ring hom and injective
    assert len(set(table)) == F.q
    return K, emb
