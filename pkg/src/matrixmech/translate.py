"""Translation of classical Fourier monomials into transition-amplitude sums.

A classical product a_p * a_q * ... attached to the harmonic tau stands, in
ladder labeling, for every way of walking from state n to state n - tau in
steps of size p, q, ... (each step down for emission or up for absorption;
the DC coefficient a_0 acts on the spot).  The quantum object is the sum
over those walks, averaged over the order in which the factors act and
over the emission/absorption assignments compatible with the target:

    weight of each walk = 1 / (k! * N_s)

with k factors and N_s sign assignments whose step sum reaches -tau.  Walks
that would visit a negative state stay in the average with value zero, so
the bottom of the ladder enters only through vanishing amplitudes.

This prescription mechanically reproduces the symmetrized 1/2-sums of the
quantum equations of motion, e.g.

    a1*a2  @ tau=3  ->  (1/2)[a(n,n-1)a(n-1,n-3) + a(n,n-2)a(n-2,n-3)]
    a1*a1  @ tau=0  ->  (1/2)[a(n,n+1)a(n+1,n) + a(n,n-1)a(n-1,n)]
    a0*a3  @ tau=3  ->  (1/2)[a0(n)a(n,n-3) + a(n,n-3)a0(n-3)]
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence, Tuple

from .series import LambdaSeries


@dataclass(frozen=True, order=True)
class AmpRef:
    """Symbolic reference to one amplitude: a(n, m) or a0(n)."""

    is_dc: bool
    n: int
    m: int

    @staticmethod
    def amp(n: int, m: int) -> "AmpRef":
        # a(n, m) = a(m, n): store the larger state first
        hi, lo = (n, m) if n >= m else (m, n)
        return AmpRef(False, hi, lo)

    @staticmethod
    def dc(n: int) -> "AmpRef":
        return AmpRef(True, n, n)

    def __str__(self) -> str:
        if self.is_dc:
            return f"a0({self.n})"
        return f"a({self.n},{self.m})"


@dataclass(frozen=True)
class PathTerm:
    """weight * product of amplitude references."""

    weight: Fraction
    factors: Tuple[AmpRef, ...]

    def __str__(self) -> str:
        prod = "*".join(str(f) for f in self.factors)
        return f"{self.weight} * {prod}"


@dataclass(frozen=True)
class Translation:
    """Canonicalized sum of path terms for one monomial and target."""

    terms: Tuple[PathTerm, ...]
    reachable: bool

    @property
    def is_empty(self) -> bool:
        return not self.terms

    def evaluate(self, amplitude_of) -> LambdaSeries:
        """Numeric value given amplitude_of(ref) -> LambdaSeries."""
        total = LambdaSeries.zero()
        for term in self.terms:
            prod = LambdaSeries.const(1)
            for ref in term.factors:
                prod = prod * amplitude_of(ref)
            total = total + prod.scaled(term.weight)
        return total

    def __str__(self) -> str:
        if not self.terms:
            return "0 (unreachable)" if not self.reachable else "0"
        return " + ".join(str(t) for t in self.terms)


def _sign_assignments(steps: Sequence[int], tau: int):
    """Sign vectors over the nonzero steps with total displacement -tau."""
    nonzero = [p for p in steps if p]
    hits = []
    for signs in itertools.product((-1, 1), repeat=len(nonzero)):
        if sum(s * p for s, p in zip(signs, nonzero)) == -tau:
            hits.append(signs)
    return hits


def translate_product(factors: Sequence[int], n: int, tau: int) -> Translation:
    """Quantum translation of the monomial prod_i a_{factors[i]} at cos(tau).

    factors are harmonic numbers (0 denotes the DC coefficient a_0); the
    result is the weighted sum of amplitude products along all admissible
    ladder walks n -> n - tau.  An empty, unreachable Translation is
    returned when no sign assignment reaches the target at all.
    """
    if n < 0:
        raise ValueError("start state must be nonnegative")
    k = len(factors)
    if k == 0:
        raise ValueError("empty factor list")

    n_signs = len(_sign_assignments(factors, tau))
    if n_signs == 0:
        return Translation(terms=(), reachable=False)

    weight = Fraction(1, factorial(k) * n_signs)
    accum: dict = {}
    for perm in itertools.permutations(range(k)):
        steps = [factors[i] for i in perm]
        for signs in _sign_assignments(steps, tau):
            state = n
            refs = []
            ok = True
            sign_iter = iter(signs)
            for p in steps:
                if p == 0:
                    refs.append(AmpRef.dc(state))
                    continue
                s = next(sign_iter)
                nxt = state + s * p
                if nxt < 0:
                    ok = False  # visits a negative state: contributes zero
                    break
                refs.append(AmpRef.amp(state, nxt))
                state = nxt
            if not ok or state != n - tau:
                continue
            key = tuple(sorted(refs))
            accum[key] = accum.get(key, Fraction(0)) + weight

    terms = tuple(
        PathTerm(weight=w, factors=key)
        for key, w in sorted(accum.items())
        if w
    )
    return Translation(terms=terms, reachable=True)
