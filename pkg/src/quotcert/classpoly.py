"""Integer polynomials in the class L of the affine line.

Every stratum the engine produces has a class in Z[L]; point counting
evaluates L at the field size q.  Coefficients are stored low degree first
and trimmed, so the zero polynomial is the empty tuple and representations
are canonical.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ClassPoly:
    coeffs: tuple = ()

    def __post_init__(self):
        c = [int(x) for x in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @staticmethod
    def zero():
        return ClassPoly(())

    @staticmethod
    def one():
        return ClassPoly((1,))

    @staticmethod
    def lefschetz_power(n):
        """L^n."""
        return ClassPoly((0,) * n + (1,))

    @staticmethod
    def lefschetz_minus_one_power(n):
        """(L - 1)^n, the class of a split torus of rank n."""
        out = ClassPoly.one()
        for _ in range(n):
            out = out * ClassPoly((-1, 1))
        return out

    def is_zero(self):
        return not self.coeffs

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else -1

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0] * (n - len(other.coeffs))
        return ClassPoly(tuple(x + y for x, y in zip(a, b)))

    def __sub__(self, other):
        return self + other.scale(-1)

    def __mul__(self, other):
        if not self.coeffs or not other.coeffs:
            return ClassPoly(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    out[i + j] += x * y
        return ClassPoly(tuple(out))

    def scale(self, c):
        return ClassPoly(tuple(c * x for x in self.coeffs))

    def evaluate(self, q: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * q + c
        return acc

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            if i == 0:
                terms.append(f"{c:+d}")
            else:
                mono = "L" if i == 1 else f"L^{i}"
                if c == 1:
                    terms.append(f"+{mono}")
                elif c == -1:
                    terms.append(f"-{mono}")
                else:
                    terms.append(f"{c:+d}{mono}")
        s = "".join(terms)
        return s[1:] if s.startswith("+") else s
