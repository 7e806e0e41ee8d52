"""Dense univariate helpers on coefficient lists (lowest degree first)."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .scalar import QuadElem, Scalar

Coeffs = list


def trim(p: Sequence) -> Coeffs:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def deg(p: Sequence) -> int:
    return len(trim(p)) - 1


def add(p: Sequence, q: Sequence) -> Coeffs:
    n = max(len(p), len(q))
    return trim(
        [(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)]
    )


def scale(p: Sequence, c) -> Coeffs:
    return trim([c * a for a in p])


def sub(p: Sequence, q: Sequence) -> Coeffs:
    return add(p, scale(q, -1))


def mul(p: Sequence, q: Sequence) -> Coeffs:
    if not p or not q:
        return []
    out: list = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return trim(out)


def divmod_(p: Sequence, q: Sequence) -> tuple[Coeffs, Coeffs]:
    p, q = trim(p), trim(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    quo: list = [Fraction(0)] * max(len(p) - len(q) + 1, 0)
    rem = list(p)
    lead = q[-1]
    while len(rem) >= len(q) and rem:
        k = len(rem) - len(q)
        c = rem[-1] / lead
        quo[k] = c
        for i, b in enumerate(q):
            rem[k + i] = rem[k + i] - c * b
        rem = trim(rem[:-1]) if len(rem) else rem
        rem = trim(rem)
    return trim(quo), trim(rem)


def monic(p: Sequence) -> Coeffs:
    p = trim(p)
    if not p:
        return []
    lead = p[-1]
    return [a / lead for a in p]


def gcd(p: Sequence, q: Sequence) -> Coeffs:
    a, b = trim(p), trim(q)
    while b:
        _, r = divmod_(a, b)
        a, b = b, r
    return monic(a) if a else []


def derivative(p: Sequence) -> Coeffs:
    return trim([k * p[k] for k in range(1, len(p))])


def evaluate(p: Sequence, x) -> Scalar:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def shift(p: Sequence, x0) -> Coeffs:
    """Coefficients of ``p(x0 + h)`` in ``h``."""
    out = list(p)
    n = len(out)
    for i in range(n):
        for j in range(n - 2, i - 1, -1):
            out[j] = out[j] + x0 * out[j + 1]
    return trim(out)


def compose_linear(p: Sequence, a, b) -> Coeffs:
    """Coefficients of ``p(a + b*x)``."""
    result: list = []
    power: list = [Fraction(1)]
    for c in p:
        result = add(result, scale(power, c))
        power = mul(power, [a, b])
    return result


def is_rational(p: Sequence) -> bool:
    return not any(isinstance(c, QuadElem) for c in p)


def primitive_integer(p: Sequence) -> list[int]:
    """Scale a rational polynomial to coprime integer coefficients."""
    p = trim(p)
    den = 1
    for c in p:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in p]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    g = g or 1
    if ints and ints[-1] < 0:
        g = -g
    return [c // g for c in ints]


def squarefree(p: Sequence) -> Coeffs:
    p = trim(p)
    g = gcd(p, derivative(p))
    if len(g) <= 1:
        return monic(p)
    q, _ = divmod_(p, g)
    return monic(q)


def _divisors(n: int) -> list[int]:
    n = abs(n)
    primes: dict[int, int] = {}
    m, f = n, 2
    while f * f <= m:
        while m % f == 0:
            primes[f] = primes.get(f, 0) + 1
            m //= f
        f += 1 if f == 2 else 2
    if m > 1:
        primes[m] = primes.get(m, 0) + 1
    divs = [1]
    for pr, e in primes.items():
        divs = [d * pr**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def rational_roots(p: Sequence) -> list[Fraction]:
    """All distinct rational roots of a rational polynomial."""
    p = trim(p)
    roots: list[Fraction] = []
    if len(p) <= 1:
        return roots
    while p and p[0] == 0:
        if Fraction(0) not in roots:
            roots.append(Fraction(0))
        p = p[1:]
    if len(p) <= 1:
        return roots
    ints = primitive_integer(p)
    for num in _divisors(ints[0]):
        for den in _divisors(ints[-1]):
            for s in (1, -1):
                r = Fraction(s * num, den)
                if r not in roots and evaluate(p, r) == 0:
                    roots.append(r)
    return sorted(roots)


def sturm_sequence(p: Sequence) -> list[Coeffs]:
    seq = [trim(p), derivative(p)]
    while seq[-1] and deg(seq[-1]) > 0:
        _, r = divmod_(seq[-2], seq[-1])
        if not r:
            break
        seq.append(scale(r, -1))
    return seq


def _sign_changes(values) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _sign_at_infinity(p: Sequence) -> int:
    p = trim(p)
    return 0 if not p else (1 if p[-1] > 0 else -1)


def sturm_count(p: Sequence, lo, hi) -> int:
    """Number of distinct real roots of ``p`` in ``(lo, hi]``; ``hi=None`` is +inf."""
    seq = sturm_sequence(p)
    at_lo = [evaluate(s, lo) for s in seq]
    if hi is None:
        at_hi = [_sign_at_infinity(s) for s in seq]
    else:
        at_hi = [evaluate(s, hi) for s in seq]
    return _sign_changes(at_lo) - _sign_changes(at_hi)
