"""Exact arithmetic in cyclotomic fields and controlled-precision evaluation.

Numbers in Q(zeta_m) live on the power basis 1, zeta, ..., zeta^(phi(m)-1)
mod the m-th cyclotomic polynomial, with Fraction coefficients: equality is
decidable and Galois twists are exact. Transcendental values (log Gamma,
Hurwitz zeta derivative, embeddings) go through a PrecisionContext that fixes
the mpmath working precision and the comparison tolerance; internally we
carry guard bits and round once at the end.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd

import mpmath as mp

GUARD_BITS = 32


# ---------------------------------------------------------------------------
# small multiplicative number theory

def factorize(n):
    """Prime factorization as a list of (p, e), ascending p. n >= 1."""
    if n < 1:
        raise ValueError("factorize needs n >= 1")
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def is_prime(n):
    return n >= 2 and factorize(n) == [(n, 1)]


def euler_phi(n):
    phi = 1
    for p, e in factorize(n):
        phi *= (p - 1) * p ** (e - 1)
    return phi


def divisors(n):
    ds = [1]
    for p, e in factorize(n):
        ds = [d * p ** k for d in ds for k in range(e + 1)]
    return sorted(ds)


def mobius(n):
    mu = 1
    for _, e in factorize(n):
        if e > 1:
            return 0
        mu = -mu
    return mu


def primitive_root(q):
    """Smallest primitive root mod q for q an odd prime power or 2, 4."""
    fact = factorize(q)
    if q in (2, 4):
        return q - 1
    if len(fact) != 1 or fact[0][0] == 2:
        raise ValueError(f"no primitive root mod {q}")
    phi = euler_phi(q)
    prime_divs = [p for p, _ in factorize(phi)]
    for g in range(2, q):
        if gcd(g, q) != 1:
            continue
        if all(pow(g, phi // p, q) != 1 for p in prime_divs):
            return g
    raise AssertionError("unreachable")


def crt(pairs):
    """x mod prod(m) with x = r (mod m) for each (r, m); moduli coprime."""
    x, m = 0, 1
    for r, mi in pairs:
        g = gcd(m, mi)
        assert g == 1
        # x + m*t = r (mod mi)
        t = ((r - x) * pow(m, -1, mi)) % mi
        x += m * t
        m *= mi
    return x % m


# ---------------------------------------------------------------------------
# cyclotomic polynomials and power tables

def _poly_mul_int(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_divexact_int(a, b):
    """a / b for integer polynomials with exact division (b monic-led)."""
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    out = [0] * (len(a) - db)
    for i in range(len(out) - 1, -1, -1):
        q, r = divmod(a[i + db], lb)
        assert r == 0
        out[i] = q
        if q:
            for j, y in enumerate(b):
                a[i + j] -= q * y
    assert all(x == 0 for x in a)
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m):
    """Coefficients of Phi_m, ascending degree, as a tuple of ints."""
    if m < 1:
        raise ValueError("m >= 1")
    num = [1]
    den = [1]
    for d in divisors(m):
        mu = mobius(m // d)
        if mu == 1:
            f = [0] * d + [1]
            f[0] = -1  # x^d - 1
            num = _poly_mul_int(num, f)
        elif mu == -1:
            f = [0] * d + [1]
            f[0] = -1
            den = _poly_mul_int(den, f)
    return tuple(_poly_divexact_int(num, den))


@lru_cache(maxsize=None)
def _power_table(m):
    """x^j mod Phi_m for 0 <= j < max(m, 2*phi(m) - 1), integer tuples."""
    phi = euler_phi(m)
    poly = cyclotomic_polynomial(m)
    top = max(m, 2 * phi - 1)
    table = []
    cur = [0] * phi
    cur[0] = 1
    for _ in range(top):
        table.append(tuple(cur))
        nxt = [0] + cur[:-1]
        lead = cur[-1]
        if lead:
            for i in range(phi):
                nxt[i] -= lead * poly[i]
        cur = nxt
    return tuple(table)


# ---------------------------------------------------------------------------
# cyclotomic numbers

class CyclotomicNumber:
    """Element of Q(zeta_m) on the power basis mod Phi_m (exact)."""

    __slots__ = ("m", "c")
    __hash__ = None  # equality lifts across moduli; hashing would not

    def __init__(self, m, coeffs):
        phi = euler_phi(m)
        c = tuple(Fraction(x) for x in coeffs)
        assert len(c) == phi
        self.m = m
        self.c = c

    # -- constructors
    @classmethod
    def rational(cls, q):
        return cls(1, (Fraction(q),))

    @classmethod
    def zero(cls, m=1):
        return cls(m, (0,) * euler_phi(m))

    @classmethod
    def root_of_unity(cls, m, k=1):
        tab = _power_table(m)
        return cls(m, tab[k % m])

    # -- modulus lifting
    def lift(self, big_m):
        if big_m == self.m:
            return self
        if big_m % self.m:
            raise ValueError("can only lift to a multiple modulus")
        tab = _power_table(big_m)
        step = big_m // self.m
        phi = euler_phi(big_m)
        out = [Fraction(0)] * phi
        for i, x in enumerate(self.c):
            if x:
                row = tab[(i * step) % big_m]
                for j in range(phi):
                    if row[j]:
                        out[j] += x * row[j]
        return CyclotomicNumber(big_m, out)

    def _common(self, other):
        if not isinstance(other, CyclotomicNumber):
            other = CyclotomicNumber.rational(other)
        m = self.m * other.m // gcd(self.m, other.m)
        return self.lift(m), other.lift(m)

    # -- ring ops
    def __add__(self, other):
        a, b = self._common(other)
        return CyclotomicNumber(a.m, tuple(x + y for x, y in zip(a.c, b.c)))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.m, tuple(-x for x in self.c))

    def __sub__(self, other):
        return self + (-other if isinstance(other, CyclotomicNumber)
                       else CyclotomicNumber.rational(other).__neg__())

    def __rsub__(self, other):
        return CyclotomicNumber.rational(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber(self.m, tuple(x * other for x in self.c))
        a, b = self._common(other)
        phi = len(a.c)
        conv = [Fraction(0)] * (2 * phi - 1)
        for i, x in enumerate(a.c):
            if x:
                for j, y in enumerate(b.c):
                    if y:
                        conv[i + j] += x * y
        out = list(conv[:phi])
        tab = _power_table(a.m)
        for k in range(phi, 2 * phi - 1):
            if conv[k]:
                row = tab[k]
                for j in range(phi):
                    if row[j]:
                        out[j] += conv[k] * row[j]
        return CyclotomicNumber(a.m, out)

    __rmul__ = __mul__

    def mul_root(self, k):
        """Multiply by zeta_m^k (exponent shift through the power table)."""
        tab = _power_table(self.m)
        phi = len(self.c)
        out = [Fraction(0)] * phi
        for i, x in enumerate(self.c):
            if x:
                row = tab[(i + k) % self.m]
                for j in range(phi):
                    if row[j]:
                        out[j] += x * row[j]
        return CyclotomicNumber(self.m, out)

    def inverse(self):
        """Multiplicative inverse via extended Euclid against Phi_m."""
        if self.is_zero():
            raise ZeroDivisionError("cyclotomic zero")

        def trim(p):
            while p and p[-1] == 0:
                p.pop()
            return p

        # invariant: r_k = s_k * self (mod Phi_m); Phi_m irreducible so the
        # last nonzero remainder is a constant.
        r0 = trim([Fraction(x) for x in cyclotomic_polynomial(self.m)])
        r1 = trim(list(self.c))
        s0, s1 = [], [Fraction(1)]
        while r1:
            q = [Fraction(0)] * (len(r0) - len(r1) + 1) if len(r0) >= len(r1) else []
            rem = list(r0)
            for i in range(len(q) - 1, -1, -1):
                c = rem[i + len(r1) - 1] / r1[-1]
                q[i] = c
                if c:
                    for j, y in enumerate(r1):
                        rem[i + j] -= c * y
            r0, r1 = r1, trim(rem)
            s0, s1 = s1, trim(_poly_sub_frac(s0, _poly_mul_frac(q, s1)))
        assert len(r0) == 1
        inv_poly = [x / r0[0] for x in s0]
        phi = euler_phi(self.m)
        out = [Fraction(0)] * phi
        tab = _power_table(self.m)
        for i, x in enumerate(inv_poly):
            if x:
                row = tab[i]
                for j in range(phi):
                    if row[j]:
                        out[j] += x * row[j]
        return CyclotomicNumber(self.m, out)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        a, b = self._common(other)
        return a * b.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = CyclotomicNumber.rational(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- Galois
    def galois(self, t):
        """Apply zeta_m -> zeta_m^t; requires gcd(t, m) = 1."""
        t %= self.m
        if gcd(t, self.m) != 1:
            raise ValueError(f"galois exponent {t} not invertible mod {self.m}")
        if self.m <= 2 or t == 1:
            return self
        tab = _power_table(self.m)
        phi = len(self.c)
        out = [Fraction(0)] * phi
        for i, x in enumerate(self.c):
            if x:
                row = tab[(i * t) % self.m]
                for j in range(phi):
                    if row[j]:
                        out[j] += x * row[j]
        return CyclotomicNumber(self.m, out)

    def conjugate(self):
        return self.galois(-1 % self.m) if self.m > 2 else self

    # -- predicates / coercions
    def is_zero(self):
        return all(x == 0 for x in self.c)

    def is_rational(self):
        return all(x == 0 for x in self.c[1:])

    def as_fraction(self):
        if not self.is_rational():
            raise ValueError(f"not rational: {self!r}")
        return self.c[0]

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CyclotomicNumber.rational(other)
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        a, b = self._common(other)
        return a.c == b.c

    # -- numerics (call under a PrecisionContext guard)
    def embed(self, a=1):
        """Complex value under zeta_m -> exp(2 pi i a / m), current mp prec."""
        total = mp.mpc(0)
        for i, x in enumerate(self.c):
            if x:
                e = (2 * ((a * i) % self.m)) % (2 * self.m)
                w = mp.expjpi(mp.mpf(e) / self.m)
                total += mp.mpf(x.numerator) / x.denominator * w
        return total

    def __repr__(self):
        if self.is_rational():
            return f"Cyc({self.c[0]})"
        terms = [f"{x}*z{self.m}^{i}" for i, x in enumerate(self.c) if x]
        return "Cyc(" + " + ".join(terms) + ")"


def _poly_mul_frac(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_sub_frac(a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else Fraction(0)
        y = b[i] if i < len(b) else Fraction(0)
        out.append(x - y)
    return out


# ---------------------------------------------------------------------------
# precision context and special functions

@dataclass(frozen=True)
class PrecisionContext:
    """Working precision (bits) and comparison tolerance 2**tol_exp."""

    bits: int = 192
    tol_exp: int = -100

    def __post_init__(self):
        if self.bits < 64:
            raise ValueError("need at least 64 bits")
        if self.tol_exp >= 0 or -self.tol_exp > self.bits - 16:
            raise ValueError("tolerance must be negative and leave headroom below the precision")

    def guard(self):
        return mp.workprec(self.bits + GUARD_BITS)

    def final(self, x):
        with mp.workprec(self.bits):
            return +x

    @property
    def tol(self):
        with mp.workprec(self.bits):
            return mp.mpf(2) ** self.tol_exp

    def mpf(self, q):
        q = Fraction(q)
        return mp.mpf(q.numerator) / q.denominator

    def as_dict(self):
        return {"bits": self.bits, "tol_exp": self.tol_exp}


@lru_cache(maxsize=None)
def bernoulli_number(n):
    """Exact Bernoulli number B_n (B_1 = -1/2)."""
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(-1, 2)
    if n % 2:
        return Fraction(0)
    acc = Fraction(0)
    for j in range(n):
        acc += comb(n + 1, j) * bernoulli_number(j)
    return -acc / (n + 1)


def _log_gamma_guarded(x, ctx):
    """log Gamma(x) at the current (guarded) precision; x rational > 0.

    Stirling with argument shift. The series is truncated once the next term
    drops below 2^-(prec+8); for real positive argument the remainder of the
    asymptotic series is bounded by the first omitted term.
    """
    prec = mp.mp.prec
    z0 = ctx.mpf(x)
    shift_to = max(16, int(0.35 * prec) + 8)  # keeps the min term far below target
    n_shift = max(0, int(mp.ceil(shift_to - z0)))
    z = z0 + n_shift
    val = (z - mp.mpf(1) / 2) * mp.log(z) - z + mp.log(2 * mp.pi) / 2
    target = mp.mpf(2) ** (-(prec + 8))
    zz = z * z
    pw = z
    j = 1
    prev_abs = mp.inf
    while True:
        b = bernoulli_number(2 * j)
        term = ctx.mpf(b / (2 * j * (2 * j - 1))) / pw
        t_abs = abs(term)
        if t_abs >= prev_abs:
            raise ArithmeticError("Stirling series failed to reach target precision")
        if t_abs < target:
            break  # remainder bounded by this omitted term
        val += term
        prev_abs = t_abs
        pw *= zz
        j += 1
    for k in range(n_shift):  # Gamma(z0) = Gamma(z0 + N) / prod (z0 + k)
        val -= mp.log(z0 + k)
    return val


def log_gamma(x, ctx):
    """log Gamma(x) for rational x > 0, rounded once to ctx.bits."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("log_gamma needs x > 0")
    with ctx.guard():
        val = _log_gamma_guarded(x, ctx)
    return ctx.final(val)


def hurwitz_zeta_at0(x, k, ctx):
    """zeta_H(s, x) data at s = 0 for rational x in (0, 1].

    k = 0: the exact value 1/2 - x (a Fraction).
    k = 1: d/ds at 0, log Gamma(x) - log(2 pi)/2, an mpf at ctx.bits.
    """
    x = Fraction(x)
    if not 0 < x <= 1:
        raise ValueError("x must be in (0, 1]")
    if k == 0:
        return Fraction(1, 2) - x
    if k == 1:
        with ctx.guard():
            val = _log_gamma_guarded(x, ctx) - mp.log(2 * mp.pi) / 2
        return ctx.final(val)
    raise ValueError("k must be 0 or 1")
