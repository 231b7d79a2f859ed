"""Exact rational and univariate polynomial arithmetic over Q.

Polynomials are dense ascending coefficient tuples of Fraction with no
trailing zeros; the zero polynomial has an empty tuple.  Roots of unity are
never represented as complex numbers: zero sets are described by cyclotomic
orders n (the factor Phi_n) with multiplicities, which is enough because
multiplicities of a Q-polynomial are constant along each Galois orbit.

All values are immutable after construction and all operations are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import InvariantViolation

ZERO = Fraction(0)
ONE = Fraction(1)


def rat_to_str(x: Fraction) -> str:
    """Serialize a rational as "p/q", or "p" when the denominator is 1."""
    if x.denominator == 1:
        return str(x.numerator)
    return "%d/%d" % (x.numerator, x.denominator)


def rat_from_str(s: str) -> Fraction:
    return Fraction(s)


class Poly:
    """Dense univariate polynomial with Fraction coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [c if isinstance(c, Fraction) else Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    # -- basic structure -------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    def leading(self) -> Fraction:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def constant(self) -> Fraction:
        return self.coeffs[0] if self.coeffs else ZERO

    def coefficient(self, n: int) -> Fraction:
        if 0 <= n < len(self.coeffs):
            return self.coeffs[n]
        return ZERO

    def val0(self) -> int:
        """Multiplicity of the zero at z = 0."""
        if not self.coeffs:
            raise ValueError("zero polynomial has no valuation at 0")
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        raise AssertionError("unnormalized polynomial")

    def __eq__(self, other):
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "Poly(0)"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(rat_to_str(c))
            elif i == 1:
                parts.append("%s*z" % rat_to_str(c))
            else:
                parts.append("%s*z^%d" % (rat_to_str(c), i))
        return "Poly(%s)" % " + ".join(parts)

    # -- ring operations -------------------------------------------------

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(other))
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [ZERO] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca == 0:
                continue
            for j, cb in enumerate(b):
                if cb != 0:
                    out[i + j] += ca * cb
        return Poly(out)

    __rmul__ = __mul__

    def scale(self, c: Fraction) -> "Poly":
        return Poly([c * x for x in self.coeffs])

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative polynomial power")
        result = P_ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def divrem(self, other: "Poly") -> tuple["Poly", "Poly"]:
        """Quotient and remainder; raises on a zero divisor."""
        if other.is_zero():
            raise ValueError("division by zero polynomial")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly(), self
        quot = [ZERO] * (dq + 1)
        lead = other.coeffs[-1]
        db = len(other.coeffs) - 1
        for i in range(dq, -1, -1):
            c = rem[i + db]
            if c == 0:
                continue
            q = c / lead
            quot[i] = q
            for j, cb in enumerate(other.coeffs):
                rem[i + j] -= q * cb
        return Poly(quot), Poly(rem)

    def exact_div(self, other: "Poly") -> "Poly":
        """Division known to be exact; a nonzero remainder is a bug."""
        q, r = self.divrem(other)
        if not r.is_zero():
            raise InvariantViolation("expected exact polynomial division")
        return q

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(1 / self.leading())

    # -- substitutions ---------------------------------------------------

    def substitute_power(self, m: int) -> "Poly":
        """The polynomial p(z^m)."""
        if m < 1:
            raise ValueError("substitution power must be >= 1")
        if m == 1 or self.is_zero():
            return self
        out = [ZERO] * (m * (len(self.coeffs) - 1) + 1)
        for i, c in enumerate(self.coeffs):
            out[m * i] = c
        return Poly(out)

    def shift(self, n: int) -> "Poly":
        """Multiply by z^n (n may be negative when divisible)."""
        if self.is_zero() or n == 0:
            return self
        if n > 0:
            return Poly((ZERO,) * n + self.coeffs)
        if any(c != 0 for c in self.coeffs[:-n]):
            raise ValueError("not divisible by z^%d" % -n)
        return Poly(self.coeffs[-n:])

    def evaluate(self, x: Fraction) -> Fraction:
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


P_ZERO = Poly()
P_ONE = Poly([1])
P_Z = Poly([0, 1])


def poly_from_ints(*cs) -> Poly:
    return Poly(cs)


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd by the Euclidean algorithm (monic == positive leading)."""
    a, b = p, q
    while not b.is_zero():
        a, b = b, a.divrem(b)[1]
    return a.monic()


def poly_gcd_list(polys) -> Poly:
    """Monic gcd of a list; this is the content of an equation's coefficients."""
    g = P_ZERO
    for p in polys:
        g = poly_gcd(g, p)
        if g.degree() == 0:
            break
    return g


def poly_lcm(p: Poly, q: Poly) -> Poly:
    if p.is_zero() or q.is_zero():
        return P_ZERO
    return (p * q).exact_div(poly_gcd(p, q)).monic()


# -- cyclotomic machinery ------------------------------------------------


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    result = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


_PHI_SIEVE: list[int] = [0, 1]


def _phi_upto(limit: int) -> list[int]:
    """Totients 0..limit by sieve, grown on demand and cached."""
    global _PHI_SIEVE
    if limit < len(_PHI_SIEVE):
        return _PHI_SIEVE
    table = list(range(limit + 1))
    for p in range(2, limit + 1):
        if table[p] == p:  # p prime
            for mult in range(p, limit + 1, p):
                table[mult] -= table[mult] // p
    _PHI_SIEVE = table
    return table


@lru_cache(maxsize=None)
def _mobius(n: int) -> int:
    result = 1
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            result = -result
        p += 1
    if m > 1:
        result = -result
    return result


def _int_mul_xb_minus_1(a: list[int], b: int) -> list[int]:
    out = [0] * (len(a) + b)
    for i, c in enumerate(a):
        out[i + b] += c
        out[i] -= c
    return out


def _int_div_xb_minus_1(a: list[int], b: int) -> list[int]:
    # exact division by z^b - 1: q_m = a_{m+b} + q_{m+b}, from the top down
    q = [0] * (len(a) - b)
    for m in range(len(a) - b - 1, -1, -1):
        q[m] = a[m + b] + (q[m + b] if m + b < len(q) else 0)
    return q


@lru_cache(maxsize=None)
def _cyclotomic_int(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n via the Moebius product
    prod_{d | n} (z^d - 1)^mu(n/d), all in integer arithmetic."""
    if n < 1:
        raise ValueError("cyclotomic order must be >= 1")
    divisors = [d for d in range(1, n + 1) if n % d == 0]
    acc = [1]
    for d in divisors:
        if _mobius(n // d) == 1:
            acc = _int_mul_xb_minus_1(acc, d)
    for d in divisors:
        if _mobius(n // d) == -1:
            acc = _int_div_xb_minus_1(acc, d)
    return tuple(acc)


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> Poly:
    """The n-th cyclotomic polynomial Phi_n over Z."""
    return Poly(_cyclotomic_int(n))


def cyclo_multiplicity(p: Poly, n: int) -> int:
    """Multiplicity of Phi_n as a factor of p (p nonzero)."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    phi_n = cyclotomic(n)
    e = 0
    while p.degree() >= phi_n.degree():
        q, r = p.divrem(phi_n)
        if not r.is_zero():
            break
        p = q
        e += 1
    return e


@dataclass(frozen=True)
class CyclotomicProfile:
    """Zero set of a polynomial split into z-power, cyclotomic, and rest.

    ``z_power`` is the multiplicity of the root 0, ``cyclo`` the detected
    cyclotomic orders with multiplicities, and ``remainder`` the cofactor,
    certified free of roots of unity by exhausting all candidate orders.
    """

    z_power: int
    cyclo: tuple[tuple[int, int], ...]
    remainder: Poly

    def reconstruct(self) -> Poly:
        p = self.remainder.shift(self.z_power)
        for n, e in self.cyclo:
            p = p * cyclotomic(n) ** e
        return p

    def multiplicity(self, n: int) -> int:
        for m, e in self.cyclo:
            if m == n:
                return e
        return 0


def cyclotomic_profile(p: Poly) -> CyclotomicProfile:
    """Detect every cyclotomic factor of p with exact multiplicity.

    Candidate orders run up to 2*deg^2, which is complete because
    phi(n) >= sqrt(n/2); each candidate with phi(n) <= deg is tested by
    trial division.
    """
    if p.is_zero():
        raise ValueError("zero polynomial has no profile")
    z_power = p.val0()
    rest = p.shift(-z_power)
    # move to a primitive integer coefficient list; dividing out monic
    # integer factors keeps it integral, and the scale is restored at the end
    denom_lcm = 1
    for c in rest.coeffs:
        denom_lcm = denom_lcm * c.denominator // _gcd(denom_lcm, c.denominator)
    ints = [int(c * denom_lcm) for c in rest.coeffs]
    numer_gcd = 0
    for c in ints:
        numer_gcd = _gcd(numer_gcd, c)
    ints = [c // numer_gcd for c in ints]
    scale = Fraction(numer_gcd, denom_lcm)

    phi = _phi_upto(2 * (len(ints) - 1) ** 2)
    found = []
    n = 1
    while len(ints) > 1 and n <= 2 * (len(ints) - 1) ** 2:
        if phi[n] <= len(ints) - 1:
            # cheap necessary condition: Phi_n(2) divides p(2) over Z
            at2 = _int_eval(ints, 2)
            f2 = _int_eval(list(_cyclotomic_int(n)), 2)
            if at2 == 0 or f2 == 1 or at2 % f2 == 0:
                phi_n = list(_cyclotomic_int(n))
                e = 0
                while True:
                    q = _int_divrem_monic(ints, phi_n)
                    if q is None:
                        break
                    ints = q
                    e += 1
                if e:
                    found.append((n, e))
        n += 1
    return CyclotomicProfile(z_power, tuple(found), Poly([scale * c for c in ints]))


def _int_eval(cs: list[int], x: int) -> int:
    acc = 0
    for c in reversed(cs):
        acc = acc * x + c
    return acc


def _int_divrem_monic(a: list[int], b: list[int]) -> list[int] | None:
    """Exact quotient of integer lists for monic b, or None when the
    division leaves a remainder."""
    dq = len(a) - len(b)
    if dq < 0:
        return None
    rem = a[:]
    quot = [0] * (dq + 1)
    db = len(b) - 1
    for i in range(dq, -1, -1):
        c = rem[i + db]
        if c:
            quot[i] = c
            for j, cb in enumerate(b):
                rem[i + j] -= c * cb
    if any(rem):
        return None
    return quot


def multiplicative_order(k: int, n: int) -> int:
    """Least M >= 1 with k^M == 1 (mod n); requires gcd(k, n) = 1."""
    if n == 1:
        return 1
    if _gcd(k, n) != 1:
        raise ValueError("k and n are not coprime")
    acc = k % n
    m = 1
    while acc != 1:
        acc = (acc * k) % n
        m += 1
    return m


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


@dataclass(frozen=True)
class ClassifiedZeros:
    """Root-of-unity zeros split by the orbit of z -> z^k.

    ``fixed`` holds orders n with gcd(n, k) = 1 as (n, multiplicity, M)
    where M is minimal with k^M == 1 (mod n), so the roots satisfy
    zeta^(k^M) = zeta.  ``set_a`` holds the remaining orders, whose roots
    never return to themselves under repeated k-th powers.
    """

    fixed: tuple[tuple[int, int, int], ...]
    set_a: tuple[tuple[int, int], ...]


def classify_unity_zeros(profile: CyclotomicProfile, k: int) -> ClassifiedZeros:
    fixed = []
    set_a = []
    for n, e in profile.cyclo:
        if _gcd(n, k) == 1:
            fixed.append((n, e, multiplicative_order(k, n)))
        else:
            set_a.append((n, e))
    return ClassifiedZeros(tuple(fixed), tuple(set_a))


# -- norms over the k-th roots of unity -----------------------------------


def _poly_mat_det(rows: list[list[Poly]]) -> Poly:
    """Determinant of a polynomial matrix by fraction-free elimination."""
    n = len(rows)
    m = [row[:] for row in rows]
    sign = 1
    prev = P_ONE
    for col in range(n - 1):
        pivot = None
        for i in range(col, n):
            if not m[i][col].is_zero():
                pivot = i
                break
        if pivot is None:
            return P_ZERO
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            sign = -sign
        for i in range(col + 1, n):
            for j in range(col + 1, n):
                m[i][j] = (m[i][j] * m[col][col] - m[i][col] * m[col][j]).exact_div(prev)
            m[i][col] = P_ZERO
        prev = m[col][col]
    det = m[n - 1][n - 1]
    return det if sign == 1 else -det


def norm_over_kth_roots(q: Poly, k: int) -> Poly:
    """The polynomial N with N(z^k) equal to the product of q(w*z) over w^k = 1.

    Splitting q into its k sections q(z) = sum_r z^r B_r(z^k) turns the
    product over the k-th roots of unity into the determinant of the k x k
    circulant matrix with entries z^r B_r(z^k), so everything stays in Q[z].
    N(z^k) agrees with the product including leading coefficients, hence q
    divides N(z^k) exactly.
    """
    if q.is_zero():
        raise ValueError("norm of the zero polynomial")
    if k == 1:
        return q
    if k < 1:
        raise ValueError("k must be >= 1")
    sections = []
    for r in range(k):
        b = Poly(q.coeffs[r::k])
        sections.append(b.substitute_power(k).shift(r))
    rows = [[sections[(j - i) % k] for j in range(k)] for i in range(k)]
    det = _poly_mat_det(rows)
    out = [ZERO] * (det.degree() // k + 1) if not det.is_zero() else []
    for i, c in enumerate(det.coeffs):
        if c != 0:
            if i % k != 0:
                raise InvariantViolation("norm is not a polynomial in z^k")
            out[i // k] = c
    return Poly(out)


class RationalFunction:
    """Reduced fraction of two polynomials; denominator kept monic."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly = P_ONE, _reduced=False):
        if den.is_zero():
            raise ValueError("zero denominator")
        if num.is_zero():
            num, den = P_ZERO, P_ONE
        elif not _reduced:
            g = poly_gcd(num, den)
            if g.degree() > 0:
                num = num.exact_div(g)
                den = den.exact_div(g)
            lead = den.leading()
            if lead != 1:
                num = num.scale(1 / lead)
                den = den.scale(1 / lead)
        self.num = num
        self.den = den

    @classmethod
    def from_poly(cls, p: Poly) -> "RationalFunction":
        return cls(p, P_ONE, _reduced=True)

    @classmethod
    def constant(cls, c) -> "RationalFunction":
        return cls(Poly([c]), P_ONE, _reduced=True)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den == P_ONE

    def __eq__(self, other):
        return (
            isinstance(other, RationalFunction)
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        if self.is_polynomial():
            return "RF(%r)" % self.num
        return "RF(%r / %r)" % (self.num, self.den)

    def __add__(self, other):
        return RationalFunction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RationalFunction(self.num.scale(Fraction(other)), self.den, _reduced=True)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def substitute_power(self, m: int) -> "RationalFunction":
        # gcd(num, den) = 1 is preserved by z -> z^m, and a monic
        # denominator stays monic, so no renormalization is needed.
        return RationalFunction(
            self.num.substitute_power(m), self.den.substitute_power(m), _reduced=True
        )

    def val0(self) -> int:
        """Order of the zero at z = 0 (negative for a pole)."""
        if self.is_zero():
            raise ValueError("zero rational function has no valuation")
        return self.num.val0() - self.den.val0()

    def cyclo_valuation(self, n: int) -> int:
        """Order of the zero along the roots of Phi_n (negative for poles)."""
        if self.is_zero():
            raise ValueError("zero rational function has no valuation")
        return cyclo_multiplicity(self.num, n) - cyclo_multiplicity(self.den, n)


RF_ZERO = RationalFunction(P_ZERO)
RF_ONE = RationalFunction(P_ONE)
