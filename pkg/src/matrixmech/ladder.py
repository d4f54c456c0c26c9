"""Quantization of the anharmonic oscillator on a finite state ladder.

The route mirrors the classical harmonic-balance solve, with Fourier
coefficients replaced by transition amplitudes a(n, m) between ladder
states and each product replaced by the symmetrized walk sum of
translate_product.  Internally everything is one object: the
half-amplitude matrix

    X(n, m) = a(n, m)/2   (n != m),      X(n, n) = lam * a0(n),

under which the walk sums are ordinary matrix products.  Base amplitudes
come from the action sum rule

    pi*m*omega * [a^2(n+1, n) - a^2(n, n-1)] = h,  a(0,-1) = 0
    =>  a^2(n, n-1) = n*h / (pi*m*omega),

the equation-of-motion entries fix overtone amplitudes and the frequency
shift of the fundamental, and level energies are the diagonal of the
energy matrix built from X.  Transition frequencies are never stored:
omega(n, m) is always (2*pi/h)(W(n) - W(m)), so chained frequencies add
exactly by construction.

A finite table cannot validate its top states (their equations reference
states above the table), so the solver works on an internal ladder padded
above n_max; every public state 0..n_max is then fully validated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .oscillator import Kind, OscillatorSpec
from .series import LambdaSeries

TWO_PI = 2.0 * math.pi


class LadderError(ValueError):
    pass


# ---------------------------------------------------------------------------
# operator matrices of series


class OperatorMatrix:
    """Square matrix of lam-series entries with symmetric products."""

    def __init__(self, dim: int, entries: Optional[List[List[LambdaSeries]]] = None):
        self.dim = dim
        if entries is None:
            z = LambdaSeries.zero()
            entries = [[z for _ in range(dim)] for _ in range(dim)]
        self.entries = entries

    def entry(self, n: int, m: int) -> LambdaSeries:
        if 0 <= n < self.dim and 0 <= m < self.dim:
            return self.entries[n][m]
        return LambdaSeries.zero()

    def set(self, n: int, m: int, value: LambdaSeries) -> None:
        self.entries[n][m] = value

    def mul(self, other: "OperatorMatrix", max_order: int) -> "OperatorMatrix":
        out = OperatorMatrix(self.dim)
        for n in range(self.dim):
            row = self.entries[n]
            for m in range(self.dim):
                acc = LambdaSeries.zero()
                for k in range(self.dim):
                    a = row[k]
                    if not a:
                        continue
                    b = other.entries[k][m]
                    if b:
                        acc = acc + (a * b)
                out.entries[n][m] = acc.truncated(max_order)
        return out

    def power(self, p: int, max_order: int) -> "OperatorMatrix":
        out = self
        for _ in range(p - 1):
            out = out.mul(self, max_order)
        return out

    def max_offdiag_abs(self, order_k: int, n_limit: int):
        best = 0
        for n in range(min(self.dim, n_limit + 1)):
            for m in range(min(self.dim, n_limit + 1)):
                if n == m:
                    continue
                v = abs(self.entries[n][m][order_k])
                if v > best:
                    best = v
        return best


# ---------------------------------------------------------------------------
# transition table


@dataclass
class SpectralLine:
    upper: int
    lower: int
    omega: float
    rel_intensity: float
    leading_order: int  # lam power at which the amplitude first appears


@dataclass
class TransitionTable:
    """Amplitudes, DC offsets and level energies, all as lam-series.

    Amplitudes are stored once per unordered pair {n, m} (a(n,m) = a(m,n));
    any reference below the ladder floor is identically zero.  The table is
    solved on an internal ladder of pad extra states so that every public
    state n <= n_max has complete equations; public accessors expose only
    0..n_max, and trusted(n) is true exactly there.
    """

    spec: OscillatorSpec
    n_max: int
    order: int
    pad: int
    amps: Dict[Tuple[int, int], LambdaSeries] = field(default_factory=dict)
    dc: Dict[int, LambdaSeries] = field(default_factory=dict)
    levels: Dict[int, LambdaSeries] = field(default_factory=dict)
    omega_fund: Dict[int, LambdaSeries] = field(default_factory=dict)

    @property
    def n_top(self) -> int:
        return self.n_max + self.pad

    def trusted(self, n: int) -> bool:
        return 0 <= n <= self.n_max

    def amp(self, n: int, m: int) -> LambdaSeries:
        """Amplitude series a(n, m); zero below the floor or off the table."""
        if n < 0 or m < 0:
            return LambdaSeries.zero()
        hi, lo = (n, m) if n >= m else (m, n)
        return self.amps.get((hi, lo), LambdaSeries.zero())

    def dc_series(self, n: int) -> LambdaSeries:
        return self.dc.get(n, LambdaSeries.zero())

    def level(self, n: int) -> LambdaSeries:
        if n not in self.levels:
            raise LadderError(f"level {n} not filled (call energy_levels)")
        return self.levels[n]

    def freq(self, n: int, m: int) -> LambdaSeries:
        """omega(n, m) = (2*pi/h)*(W(n) - W(m)) as a lam-series."""
        return (self.level(n) - self.level(m)).scaled(TWO_PI / self.spec.planck_h)

    def freq_sq(self, n: int, m: int) -> LambdaSeries:
        w = self.freq(n, m)
        return w * w

    def position_matrix(self, dim: Optional[int] = None) -> OperatorMatrix:
        """Half-amplitude matrix X over the internal ladder."""
        if dim is None:
            dim = self.n_top + 3
        x = OperatorMatrix(dim)
        for (hi, lo), series in self.amps.items():
            if hi >= dim:
                continue
            half = series.scaled(0.5)
            x.set(hi, lo, half)
            x.set(lo, hi, half)
        for n, series in self.dc.items():
            if n < dim and series:
                x.set(n, n, series.shifted(1))
        return x

    def base_amplitude(self, n: int) -> float:
        """Order-0 a(n, n-1) = sqrt(n*h/(pi*m*omega0))."""
        return self.spec.ladder_amplitude * math.sqrt(n)


def amplitude_scale(spec: OscillatorSpec) -> float:
    return spec.ladder_amplitude


def residual_scale(spec: OscillatorSpec, k: int) -> float:
    """Size of a lam^k equation-of-motion residual coefficient."""
    a = amplitude_scale(spec)
    u = spec.coupling_unit(a) or 1.0
    return spec.omega0**2 * a * u**k


def energy_scale(spec: OscillatorSpec, k: int) -> float:
    """Size of a lam^k energy-matrix entry."""
    a = amplitude_scale(spec)
    u = spec.coupling_unit(a) or 1.0
    return spec.m * spec.omega0**2 * a * a * u**k


# ---------------------------------------------------------------------------
# solving


def base_amplitudes(spec: OscillatorSpec, n_max: int, pad: int = 2) -> TransitionTable:
    """Ladder of nearest-neighbor amplitudes satisfying the sum rule.

    a(n, n-1) = sqrt(n*h/(pi*m*omega0)) with a(0,-1) = 0; every amplitude
    with |n - m| >= 2 is zero at this order.
    """
    if n_max < 1:
        raise LadderError("n_max must be at least 1")
    table = TransitionTable(spec=spec, n_max=n_max, order=0, pad=pad)
    for n in range(1, table.n_top + 3):
        table.amps[(n, n - 1)] = LambdaSeries.const(table.base_amplitude(n))
        table.omega_fund[n] = LambdaSeries.const(spec.omega0)
    return table


def quantization_residual(spec: OscillatorSpec, table: TransitionTable, n: int) -> float:
    """pi*m*omega*[a^2(n+1,n) - a^2(n,n-1)] - h at order 0 (zero when the
    ladder is correctly quantized)."""
    if n + 1 > table.n_max:
        raise LadderError("n+1 exceeds the public ladder")
    up = table.amp(n + 1, n)[0]
    down = table.amp(n, n - 1)[0] if n >= 1 else 0.0
    return math.pi * spec.m * spec.omega0 * (up * up - down * down) - spec.planck_h


def solve_quantum(spec: OscillatorSpec, n_max: int, order: int) -> TransitionTable:
    """Solve amplitudes and levels through lam^order (order 0 or 1).

    Order 1 pins, per the equations of motion at each matrix entry:
    the DC offsets and two-step amplitudes (x2 kind), the three-step
    amplitudes and the fundamental frequency shift (x3 kind), the
    fundamental amplitude correction via the sum rule at the shifted
    frequency, plus the leading coefficient of the next harmonic up
    (three-step at lam^2 for x2, five-step at lam^2 for x3).
    Levels are then filled by energy_levels.
    """
    if order not in (0, 1):
        raise LadderError("quantum solve supports order 0 or 1")
    if n_max < 3 * order + 1:
        raise LadderError("n_max too small for the requested order")
    spec.check_smallness()

    pad = 3 * order + 2
    table = base_amplitudes(spec, n_max, pad=pad)
    table.order = order
    w0sq = spec.omega0**2
    if w0sq < 1e-300:
        raise LadderError("vanishing harmonic-balance divisor (omega0^2 underflow)")

    if order >= 1 and spec.kind is not Kind.HARMONIC:
        p = spec.kind.force_power
        dim = table.n_top + 3
        x0 = table.position_matrix(dim)
        prod0 = x0.power(p, max_order=0)

        if spec.kind is Kind.QUADRATIC_FORCE:
            for n in range(dim):
                # DC entry: omega0^2 * X(n,n) + (X^2)(n,n) = 0
                v = prod0.entry(n, n)[0]
                if v:
                    table.dc[n] = LambdaSeries.const(-v / w0sq)
                # two steps down: divisor (2^2 - 1) * omega0^2
                v2 = prod0.entry(n, n - 2)[0] if n >= 2 else 0.0
                if v2:
                    table.amps[(n, n - 2)] = LambdaSeries.from_coeffs(
                        (0.0, 2.0 * v2 / (3.0 * w0sq))
                    )
        else:  # CUBIC_FORCE
            for n in range(dim):
                if n >= 3:
                    v3 = prod0.entry(n, n - 3)[0]
                    if v3:
                        table.amps[(n, n - 3)] = LambdaSeries.from_coeffs(
                            (0.0, 2.0 * v3 / (8.0 * w0sq))
                        )
                if n >= 1:
                    # fundamental entry fixes the frequency shift:
                    # omega^2(n,n-1) = omega0^2 + lam * (X^3)(n,n-1)/X(n,n-1)
                    x_nn1 = x0.entry(n, n - 1)[0]
                    wsq1 = prod0.entry(n, n - 1)[0] / x_nn1
                    w1 = wsq1 / (2.0 * spec.omega0)
                    table.omega_fund[n] = LambdaSeries.from_coeffs((spec.omega0, w1))
                    # sum rule at the shifted frequency:
                    # a^2(n,n-1)*omega(n,n-1) = n*h/(pi*m)
                    a0 = table.base_amplitude(n)
                    table.amps[(n, n - 1)] = LambdaSeries.from_coeffs(
                        (a0, -a0 * w1 / (2.0 * spec.omega0))
                    )

        # one level deeper: leading coefficient of the next harmonic,
        # from the order-1 slice of the product with the solved X
        x1 = table.position_matrix(dim)
        prod1 = x1.power(p, max_order=1)
        step = 3 if spec.kind is Kind.QUADRATIC_FORCE else 5
        divisor = (step * step - 1.0) * w0sq
        for n in range(step, dim):
            v = prod1.entry(n, n - step)[1]
            if v:
                table.amps[(n, n - step)] = LambdaSeries.from_coeffs(
                    (0.0, 0.0, 2.0 * v / divisor)
                )

    return energy_levels(spec, table)


def _omega_chain(table: TransitionTable, n: int, m: int) -> LambdaSeries:
    """omega(n, m) as the sum of fundamental frequencies along the ladder."""
    if n == m:
        return LambdaSeries.zero()
    lo, hi = (m, n) if n > m else (n, m)
    acc = LambdaSeries.zero()
    for i in range(lo + 1, hi + 1):
        acc = acc + table.omega_fund.get(i, LambdaSeries.const(table.spec.omega0))
    return acc if n > m else -acc


def energy_matrix(
    spec: OscillatorSpec, table: TransitionTable, max_order: int, freq_source: str = "levels"
) -> OperatorMatrix:
    """Full energy matrix m*(Xdot^2 + omega0^2 X^2)/2 + anharmonic potential.

    Xdot(n,m) carries i*omega(n,m)*X(n,m); products combine tags by
    frequency addition, so the matrix is well formed.  freq_source picks
    where omega(n,m) comes from: "levels" (the defining convention) or
    "chain" (solve-time fundamentals, used to bootstrap the levels).
    """
    dim = table.n_top + 3
    x = table.position_matrix(dim)

    if freq_source == "levels":
        def omega_of(n: int, m: int) -> LambdaSeries:
            return (table.levels[n] - table.levels[m]).scaled(TWO_PI / spec.planck_h)
    else:
        def omega_of(n: int, m: int) -> LambdaSeries:
            return _omega_chain(table, n, m)

    half_m = 0.5 * spec.m
    e = OperatorMatrix(dim)
    for n in range(dim):
        for m in range(dim):
            acc = LambdaSeries.zero()
            for k in range(dim):
                a = x.entry(n, k)
                if not a:
                    continue
                b = x.entry(k, m)
                if not b:
                    continue
                wa = omega_of(n, k)
                wb = omega_of(k, m)
                kin = -(wa * wb * a * b)
                acc = acc + kin + (a * b).scaled(spec.omega0**2)
            e.set(n, m, acc.scaled(half_m).truncated(max_order))

    p = spec.kind.force_power
    if p:
        pot = x.power(p + 1, max_order)
        coeff = spec.m / (p + 1.0)
        for n in range(dim):
            for m in range(dim):
                v = e.entry(n, m) + pot.entry(n, m).shifted(1).scaled(coeff)
                e.set(n, m, v.truncated(max_order))
    return e


def energy_levels(spec: OscillatorSpec, table: TransitionTable) -> TransitionTable:
    """Fill W(n) with the diagonal of the energy matrix.

    The matrix is built with solve-time frequency tags; the resulting
    level differences reproduce those same frequencies (checked by
    frequency_consistency), after which omega(n, m) is always derived
    from the levels.
    """
    for n in range(1, table.n_top + 3):
        table.omega_fund.setdefault(n, LambdaSeries.const(spec.omega0))
    e = energy_matrix(spec, table, max_order=table.order, freq_source="chain")
    for n in range(table.n_top + 3):
        table.levels[n] = e.entry(n, n).truncated(table.order)
    return table


def frequency_consistency(table: TransitionTable) -> float:
    """Max |(2*pi/h)(W(n)-W(n-1)) - omega_fund(n)| coefficient, scaled by
    omega0, over public n."""
    spec = table.spec
    worst = 0.0
    for n in range(1, table.n_max + 1):
        diff = table.freq(n, n - 1) - table.omega_fund[n]
        worst = max(worst, diff.max_abs(table.order) / spec.omega0)
    return worst


# ---------------------------------------------------------------------------
# validation operations


def trusted_residual_order(kind: Kind, order: int, delta: int) -> int:
    """Highest lam power at which the (n, m) equation holds for the
    order-`order` solution, delta = |n - m|."""
    if kind is Kind.HARMONIC:
        return order + 1
    if kind is Kind.QUADRATIC_FORCE:
        if delta <= 2:
            return order
        if delta == 3:
            return order + 1
        return min(delta - 2, order + 1)
    # cubic: even entries vanish identically by parity
    if delta % 2 == 0:
        return order + 1
    if delta <= 3:
        return order
    if delta == 5:
        return order + 1
    return min((delta - 3) // 2, order + 1)


def quantum_residuals(
    spec: OscillatorSpec, table: TransitionTable
) -> Dict[Tuple[int, int], LambdaSeries]:
    """Equation-of-motion residual series per public entry (n, m), n >= m.

    Residual = [omega0^2 - omega^2(n,m)] * X(n,m) + lam * (X^p)(n,m),
    reported in the amplitude convention (off-diagonal entries doubled), so
    each entry reproduces the cosine-coefficient equations term for term.
    """
    dim = table.n_top + 3
    x = table.position_matrix(dim)
    p = spec.kind.force_power
    prod = x.power(p, max_order=table.order + 1) if p else None
    w0sq = spec.omega0**2

    out: Dict[Tuple[int, int], LambdaSeries] = {}
    for n in range(table.n_max + 1):
        for m in range(n + 1):
            wsq = table.freq_sq(n, m)
            lin = x.entry(n, m).scaled(w0sq) - wsq * x.entry(n, m)
            r = lin
            if prod is not None:
                r = r + prod.entry(n, m).shifted(1)
            if n != m:
                r = r.scaled(2.0)
            out[(n, m)] = r.truncated(table.order + 1)
    return out


def max_scaled_residual(spec: OscillatorSpec, table: TransitionTable) -> float:
    """Largest nondimensionalized trusted residual coefficient."""
    worst = 0.0
    for (n, m), series in quantum_residuals(spec, table).items():
        top = trusted_residual_order(spec.kind, table.order, n - m)
        for k in range(top + 1):
            worst = max(worst, abs(series[k]) / residual_scale(spec, k))
    return worst


def offdiagonal_energy_check(spec: OscillatorSpec, table: TransitionTable) -> float:
    """Largest scaled off-diagonal energy-matrix entry over public states.

    All periodic parts of the energy must vanish to the solved order; this
    is the internal-consistency check of the whole labeling.
    """
    e = energy_matrix(spec, table, max_order=table.order, freq_source="levels")
    worst = 0.0
    for k in range(table.order + 1):
        v = e.max_offdiag_abs(k, table.n_max) / energy_scale(spec, k)
        worst = max(worst, v)
    return worst


def line_spectrum(table: TransitionTable) -> List[SpectralLine]:
    """Emission lines (n -> m, n > m) with intensities ~ a(n,m)^2.

    Frequencies are level differences evaluated at the oscillator's
    coupling; relative intensity (a convention: amplitude squared) is
    normalized to the strongest line.
    """
    spec = table.spec
    lam = spec.lam
    raw = []
    for n in range(1, table.n_max + 1):
        for m in range(n):
            series = table.amp(n, m)
            if not series:
                continue
            a = series.eval(lam)
            omega = table.freq(n, m).eval(lam)
            lead = next((k for k, c in enumerate(series.coeffs) if c), 0)
            raw.append((n, m, omega, a * a, lead))
    peak = max((r[3] for r in raw), default=0.0)
    lines = [
        SpectralLine(n, m, omega, (inten / peak if peak else 0.0), lead)
        for (n, m, omega, inten, lead) in raw
    ]
    return lines


@dataclass
class CorrespondenceReport:
    """Quantum/classical amplitude ratios for one reference state."""

    n: int
    overtone_ratio: Optional[float]  # a(n,n-2)/[a(n,n-1)a(n-1,n-2)] at leading order
    classical_ratio: Optional[float]  # a2/a1^2 = 1/(6 omega0^2)
    fundamental_ratio: float  # a(n,n-1) / a1 with the action fixed to n*h


def correspondence_check(
    spec: OscillatorSpec, table: TransitionTable, n: int, series=None
) -> CorrespondenceReport:
    """Compare quantum amplitudes with classical Fourier coefficients.

    The two-step amplitude relates to its neighbor product exactly as the
    classical second harmonic relates to a1^2; the fundamental amplitude
    matches the classical one whose orbit action equals n*h.  When a
    solved classical FourierSeries is passed, the classical ratio is taken
    from its coefficients instead of the closed form.
    """
    if n < 2:
        raise LadderError("correspondence check needs n >= 2")
    if n > table.n_max:
        raise LadderError("n beyond the public ladder")

    a_nm1 = table.amp(n, n - 1)[0]
    a_nm1m2 = table.amp(n - 1, n - 2)[0]
    over = table.amp(n, n - 2)[1]
    if spec.kind is Kind.QUADRATIC_FORCE and over:
        q = over / (a_nm1 * a_nm1m2)
        if series is not None:
            classical = float(series.coeff(2, 1)) / float(series.a1) ** 2
        else:
            classical = 1.0 / (6.0 * spec.omega0**2)
    else:
        q = None
        classical = None

    a1_action = math.sqrt(n * spec.planck_h / (math.pi * spec.m * spec.omega0))
    return CorrespondenceReport(
        n=n,
        overtone_ratio=q,
        classical_ratio=classical,
        fundamental_ratio=a_nm1 / a1_action,
    )
