"""Exact arithmetic in prime fields GF(p) and binary extension fields GF(2^m).

Field elements are plain Python integers in a canonical encoding: the
residue in [0, p) for a prime field, and the bit-packed coefficient
vector of a polynomial over GF(2) (bit i = coefficient of x^i) for a
binary extension field.  The canonical encoding is also the wire/file
representation of every symbol (decimal in text formats).

Extension fields are reduced modulo a fixed irreducible polynomial so
that encodings are bit-exact across runs:

    GF(4)   : x^2 + x + 1             -> 0b111       = 7
    GF(8)   : x^3 + x + 1             -> 0b1011      = 11
    GF(16)  : x^4 + x + 1             -> 0b10011     = 19
    GF(256) : x^8 + x^4 + x^3 + x + 1 -> 0b100011011 = 283

Other degrees up to 16 use the lexicographically smallest irreducible
polynomial, which reproduces the table above.
"""

from __future__ import annotations

from .errors import UsageError

MAX_EXTENSION_DEGREE = 16

# Pinned irreducible polynomials, keyed by extension degree m.
_PINNED_MODULI = {
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    8: 0b100011011,
}


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _poly_deg(a: int) -> int:
    return a.bit_length() - 1


def _poly_mod(a: int, b: int) -> int:
    """Remainder of polynomial division over GF(2)."""
    db = _poly_deg(b)
    while _poly_deg(a) >= db and a:
        a ^= b << (_poly_deg(a) - db)
    return a


def _poly_irreducible(mod: int, m: int) -> bool:
    """Exhaustive factor check: no divisor of degree 1..m//2."""
    if _poly_deg(mod) != m:
        return False
    for d in range(1, m // 2 + 1):
        for f in range(1 << d, 1 << (d + 1)):
            if _poly_mod(mod, f) == 0:
                return False
    return True


def _default_modulus(m: int) -> int:
    if m in _PINNED_MODULI:
        return _PINNED_MODULI[m]
    for cand in range(1 << m, 1 << (m + 1)):
        if _poly_irreducible(cand, m):
            return cand
    raise UsageError(f"no irreducible polynomial of degree {m} found")


class FieldSpec:
    """A finite field GF(p^m) with p prime, and m = 1 or p = 2.

    All operations take and return canonical integer encodings.  Instances
    are immutable apart from internal lookup-table caches and may be shared
    freely across threads.
    """

    def __init__(self, p: int, m: int = 1, modulus: int | None = None):
        if not _is_prime(p):
            raise UsageError(f"characteristic {p} is not prime")
        if m < 1:
            raise UsageError(f"extension degree must be >= 1, got {m}")
        if m > 1 and p != 2:
            raise UsageError("extension fields are supported for characteristic 2 only")
        if m > MAX_EXTENSION_DEGREE:
            raise UsageError(f"extension degree {m} exceeds supported maximum {MAX_EXTENSION_DEGREE}")
        if m == 1:
            if modulus is not None:
                raise UsageError("modulus is only meaningful for extension fields")
        else:
            if modulus is None:
                modulus = _default_modulus(m)
            if not _poly_irreducible(modulus, m):
                raise UsageError(f"modulus {modulus:#b} is not an irreducible polynomial of degree {m}")
        self.p = p
        self.m = m
        self.modulus = modulus
        self.q = p**m
        self._exp: list[int] | None = None
        self._log: list[int] | None = None

    # -- identity ------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FieldSpec)
            and (self.p, self.m, self.modulus) == (other.p, other.m, other.modulus)
        )

    def __hash__(self) -> int:
        return hash((self.p, self.m, self.modulus))

    def __repr__(self) -> str:
        return f"GF({self.q})"

    # -- element handling ----------------------------------------------

    def check(self, a: int) -> int:
        """Validate a canonical encoding, returning it unchanged."""
        if not isinstance(a, int) or isinstance(a, bool) or not 0 <= a < self.q:
            raise UsageError(f"{a!r} is not a canonical element of {self!r}")
        return a

    def elements(self) -> range:
        """All q elements in ascending canonical encoding."""
        return range(self.q)

    # -- arithmetic ------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        return a ^ b

    def sub(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a - b) % self.p
        return a ^ b

    def neg(self, a: int) -> int:
        if self.m == 1:
            return (-a) % self.p
        return a

    def mul(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        if self._exp is None:
            self._build_tables()
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        """Multiplicative inverse by extended Euclid; a must be nonzero."""
        if a == 0:
            raise ZeroDivisionError(f"0 has no multiplicative inverse in {self!r}")
        if self.m == 1:
            # Integer extended Euclid on (a, p).
            r0, r1 = a % self.p, self.p
            s0, s1 = 1, 0
            while r1:
                quo = r0 // r1
                r0, r1 = r1, r0 - quo * r1
                s0, s1 = s1, s0 - quo * s1
            return s0 % self.p
        # Polynomial extended Euclid on (a, modulus) over GF(2).
        r0, r1 = a, self.modulus
        s0, s1 = 1, 0
        while r1:
            quo, rem = self._poly_divmod(r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, s0 ^ self._clmul(quo, s1)
        return _poly_mod(s0, self.modulus)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        """a**e by square and multiply; pow(a, 0) == 1 for every a."""
        if e < 0:
            raise UsageError(f"exponent must be >= 0, got {e}")
        out = 1
        base = a
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    # -- internal binary-field helpers -----------------------------------

    @staticmethod
    def _clmul(a: int, b: int) -> int:
        out = 0
        while b:
            if b & 1:
                out ^= a
            a <<= 1
            b >>= 1
        return out

    def _mul_nolut(self, a: int, b: int) -> int:
        return _poly_mod(self._clmul(a, b), self.modulus)

    @staticmethod
    def _poly_divmod(a: int, b: int) -> tuple[int, int]:
        quo = 0
        db = _poly_deg(b)
        while a and _poly_deg(a) >= db:
            shift = _poly_deg(a) - db
            quo |= 1 << shift
            a ^= b << shift
        return quo, a

    def _build_tables(self) -> None:
        """Log/antilog tables for fast extension-field multiplication."""
        order = self.q - 1
        for gen in range(2, self.q):
            exp = [0] * (2 * order)
            log = [0] * self.q
            val = 1
            count = 0
            while True:
                exp[count] = val
                log[val] = count
                count += 1
                val = self._mul_nolut(val, gen)
                if val == 1:
                    break
            if count == order:
                for i in range(order, 2 * order):
                    exp[i] = exp[i - order]
                self._exp = exp
                self._log = log
                return
        raise UsageError(f"no generator found for {self!r}")  # pragma: no cover


def GF(q: int) -> FieldSpec:
    """Build the field of order q; q must be prime or a power of two."""
    if q < 2:
        raise UsageError(f"field order must be >= 2, got {q}")
    if _is_prime(q):
        return FieldSpec(q)
    if q & (q - 1) == 0:
        return FieldSpec(2, q.bit_length() - 1)
    raise UsageError(f"unsupported field order {q}: need a prime or a power of 2")
