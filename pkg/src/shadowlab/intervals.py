"""Certified scalar intervals.

Quantities derived from truncated limits are carried as [lo, hi] intervals
(value plus/minus a certified tail).  Threshold tests return True / False /
None, where None marks an undecidable comparison (the interval straddles
the threshold); callers must surface that third state rather than round it
away.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class Iv:
    lo: float
    hi: float

    def __post_init__(self):
        if self.lo > self.hi + 1e-18:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @staticmethod
    def exact(x):
        return Iv(x, x)

    @staticmethod
    def pm(center, err):
        e = abs(err)
        return Iv(center - e, center + e)

    @property
    def center(self):
        return 0.5 * (self.lo + self.hi)

    @property
    def width(self):
        return self.hi - self.lo

    def clamp_nonneg(self):
        return Iv(max(self.lo, 0.0), max(self.hi, 0.0))

    def __add__(self, other):
        o = other if isinstance(other, Iv) else Iv.exact(other)
        return Iv(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __sub__(self, other):
        o = other if isinstance(other, Iv) else Iv.exact(other)
        return Iv(self.lo - o.hi, self.hi - o.lo)

    def scale(self, k):
        a, b = k * self.lo, k * self.hi
        return Iv(min(a, b), max(a, b))

    def lt(self, threshold):
        """self < threshold: True / False / None (undecidable)."""
        if self.hi < threshold:
            return True
        if self.lo >= threshold:
            return False
        return None

    def le(self, threshold):
        if self.hi <= threshold:
            return True
        if self.lo > threshold:
            return False
        return None


def iv_max(a: Iv, b: Iv) -> Iv:
    return Iv(max(a.lo, b.lo), max(a.hi, b.hi))
