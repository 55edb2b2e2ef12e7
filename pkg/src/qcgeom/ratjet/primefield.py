"""Arithmetic in GF(p) for the probabilistic prescreen.

Elements interoperate with ints and with exact rationals (a rational
``a/b`` maps to ``a * b^-1 mod p``), so the jet and geometry code can run
unchanged over the prime field.  A nonzero rational whose image is zero
mod p is possible in principle; the prescreen reports any such
disagreement instead of trusting the fast path.
"""
from gmpy2 import mpq

__all__ = ["PRIME", "GF", "to_field"]

_P = (1 << 61) + 1


def _is_probable_prime(n):
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _next_prime(n):
    while not _is_probable_prime(n):
        n += 1
    return n


PRIME = _next_prime(_P)


def _lift(x):
    if isinstance(x, GF):
        return x.v
    if isinstance(x, int):
        return x % PRIME
    if isinstance(x, mpq) or hasattr(x, "denominator"):
        den = int(x.denominator) % PRIME
        if den == 0:
            raise ZeroDivisionError("denominator vanishes mod p")
        return int(x.numerator) * pow(den, -1, PRIME) % PRIME
    return NotImplemented


class GF:
    __slots__ = ("v",)

    def __init__(self, v=0):
        self.v = v if type(v) is int and 0 <= v < PRIME else _lift(v)

    def __repr__(self):
        return f"GF({self.v})"

    def __str__(self):
        return f"{self.v} (mod p)"

    def __bool__(self):
        return self.v != 0

    def __hash__(self):
        return hash(self.v)

    def __eq__(self, other):
        o = _lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self.v == o

    def __add__(self, other):
        o = _lift(other)
        if o is NotImplemented:
            return NotImplemented
        return GF((self.v + o) % PRIME)

    __radd__ = __add__

    def __sub__(self, other):
        o = _lift(other)
        if o is NotImplemented:
            return NotImplemented
        return GF((self.v - o) % PRIME)

    def __rsub__(self, other):
        o = _lift(other)
        if o is NotImplemented:
            return NotImplemented
        return GF((o - self.v) % PRIME)

    def __mul__(self, other):
        o = _lift(other)
        if o is NotImplemented:
            return NotImplemented
        return GF(self.v * o % PRIME)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _lift(other)
        if o is NotImplemented:
            return NotImplemented
        if o == 0:
            raise ZeroDivisionError("division by zero in GF(p)")
        return GF(self.v * pow(o, -1, PRIME) % PRIME)

    def __rtruediv__(self, other):
        o = _lift(other)
        if o is NotImplemented:
            return NotImplemented
        if self.v == 0:
            raise ZeroDivisionError("division by zero in GF(p)")
        return GF(o * pow(self.v, -1, PRIME) % PRIME)

    def __neg__(self):
        return GF((-self.v) % PRIME)

    def __pos__(self):
        return self

    def __pow__(self, k):
        return GF(pow(self.v, k, PRIME))


def to_field(x):
    return GF(x)
