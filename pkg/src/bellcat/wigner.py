"""Thermal Wigner function of the Bell-Cat states.

Two evaluation routes:

* Production: the closed-form series over the six summation indices of the
  thermal density elements.  The parity brackets split the sum into four sign
  branches (s, t), under which it factorizes per mode; for each mode the
  thermal excitation sum is contracted with the band coefficients *before*
  any phase-space point is touched, leaving a dense (order, degree) x
  (degree, point) contraction against an envelope-scaled Laguerre table.
  The Gaussian envelope is absorbed into the Laguerre recurrence, so no
  intermediate can overflow.

* Oracle: per-mode Fock kernels K(j, l; x, y) obtained by direct numerical
  integration of the Wigner transform with Hermite-function position
  wavefunctions, contracted against the operator-route density blocks.  The
  oracle never sees a Laguerre polynomial or a sign convention, so it
  arbitrates them.

Dimensionless coordinates throughout: x = q/b, y = p b/hbar with
b^2 = hbar/(m omega); the reported function is hbar^2 W, normalized so its
4D phase-space integral is 1.

Convention note: the series' chi factors follow the kernel actually produced
by the Wigner transform, chi = x - i y when the ket index exceeds the bra
index (and the sign factor (-1)^{thermal + min(ket, bra)}).  Evaluating with
`chi_mode="printed"` instead reproduces the variant that equals the kernel
form at spatially reflected points (x_i -> -x_i); `chi_mode="always-plus"` is
a deliberately broken convention kept as a negative control: it destroys the
Hermitian pairing of the terms and trips the imaginary-residue guard.
"""

from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .density import effective_amplitude, mode_thermal_blocks
from .errors import ImaginaryResidueError, QuadratureError, TruncationError
from .special_fn import laguerre_envelope_table, log_factorial_table
from .states import BellCatSpec
from .tfd import ThermalParams

__all__ = [
    "CHI_KERNEL",
    "CHI_PRINTED",
    "CHI_BROKEN",
    "PhasePoint",
    "TruncationConfig",
    "GridAxis",
    "SliceDescriptor",
    "WignerGrid",
    "default_cat_cap",
    "default_thermal_cap",
    "effective_amplitude",
    "wigner_point",
    "wigner_values",
    "wigner_grid",
    "ModeFactorization",
    "factorize",
    "hermite_functions",
    "fock_wigner_kernels",
    "wigner_point_oracle",
    "oracle_cutoff",
    "wigner_oracle_values",
    "closed_form_zero_temperature",
]

CHI_KERNEL = "kernel"
CHI_PRINTED = "printed"
CHI_BROKEN = "always-plus"
_CHI_MODES = (CHI_KERNEL, CHI_PRINTED, CHI_BROKEN)

HARD_THERMAL_CAP = 2000
IMAG_RESIDUE_TOL = 1e-9
_COORDS = ("x1", "y1", "x2", "y2")
_MODE_OF = {"x1": 1, "y1": 1, "x2": 2, "y2": 2}


@dataclass(frozen=True)
class PhasePoint:
    """Dimensionless 4D phase-space coordinates."""

    x1: float
    y1: float
    x2: float
    y2: float

    def __post_init__(self):
        for name in _COORDS:
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


def default_cat_cap(spec: BellCatSpec, params: ThermalParams) -> int:
    """Series cap for the four coherent-branch indices: ceil(a^2 + 8a + 10) at a = |alpha| u."""
    a = effective_amplitude(spec, params)
    return math.ceil(a * a + 8.0 * a + 10.0)


def default_thermal_cap(params: ThermalParams, epsilon: float) -> int:
    """Thermal index cap with geometric tail <= epsilon: ceil(ln(1/(eps(1-q)))/(beta hbar omega))."""
    if params.is_zero_temperature:
        return 1
    cap = 1
    for mode in (1, 2):
        q = params.exp_factor(mode)
        if q == 0.0:
            continue  # Gibbs factor underflowed: the mode is effectively frozen
        need = math.ceil(math.log(1.0 / (epsilon * params.one_minus_exp_factor(mode))) / -math.log(q))
        cap = max(cap, need)
    if cap > HARD_THERMAL_CAP:
        raise TruncationError(
            f"thermal tail needs {cap} levels to reach {epsilon:g}, beyond the hard cap {HARD_THERMAL_CAP}"
        )
    return cap


@dataclass(frozen=True)
class TruncationConfig:
    """Per-index series cutoffs and tail tolerance.

    Caps left as None are resolved from the state and thermal parameters at
    evaluation time (cat_cap from the thermally amplified amplitude, thermal
    cap from the Gibbs tail at `epsilon`).
    """

    cat_cap: int | None = None
    thermal_cap: int | None = None
    epsilon: float = 1e-10

    def __post_init__(self):
        if not (0.0 < self.epsilon <= 1e-3):
            raise ValueError("epsilon must lie in (0, 1e-3]")
        for name in ("cat_cap", "thermal_cap"):
            cap = getattr(self, name)
            if cap is not None and cap < 1:
                raise ValueError(f"{name} must be >= 1")

    def resolve(self, spec: BellCatSpec, params: ThermalParams) -> "TruncationConfig":
        cat = self.cat_cap if self.cat_cap is not None else default_cat_cap(spec, params)
        thermal = self.thermal_cap if self.thermal_cap is not None else default_thermal_cap(params, self.epsilon)
        return TruncationConfig(cat_cap=cat, thermal_cap=thermal, epsilon=self.epsilon)


# ---------------------------------------------------------------------------
# production path
# ---------------------------------------------------------------------------


def _mode_h_tables(gamma: complex, q: float, one_minus_q: float, cat_cap: int, thermal_cap: int):
    """Point-independent contraction tables for one mode.

    Returns (h_ket, h_bra, ring_ket, ring_bra): h_ket[st, d, N] multiplies
    chi_ket^d L^d_N and h_bra the conjugate-direction powers; the ring tables
    are the same contraction restricted to the outermost coherent band
    (max(ket, bra) index == cat_cap), whose signed contribution serves as the
    truncation-tail estimate.
    """
    lf = log_factorial_table(cat_cap + thermal_cap)
    n = np.arange(cat_cap + 1)

    log_scale = math.log(abs(gamma)) + 0.5 * math.log(one_minus_q)
    log_mag = log_scale * (n[:, None] + n[None, :]) - lf[: cat_cap + 1][:, None] - lf[: cat_cap + 1][None, :]
    phi = cmath.phase(gamma)
    base = np.exp(log_mag) * np.exp(1j * phi * (n[:, None] - n[None, :]))

    # thermal weights (-1)^{j0+n1} q^{n1} (n1+j0)!/n1! laid out per j0
    n1 = np.arange(thermal_cap + 1)
    if q > 0.0:
        log_t = n1[None, :] * math.log(q) + lf[n[:, None] + n1[None, :]] - lf[n1][None, :]
        therm = np.exp(log_t)
    else:
        therm = np.zeros((cat_cap + 1, thermal_cap + 1))
        therm[:, 0] = np.exp(lf[: cat_cap + 1])
    therm *= np.where((n[:, None] + n1[None, :]) % 2 == 0, 1.0, -1.0)

    nmax = cat_cap + thermal_cap
    h_ket = np.zeros((4, cat_cap + 1, nmax + 1), dtype=complex)
    h_bra = np.zeros((4, cat_cap + 1, nmax + 1), dtype=complex)
    ring_ket = np.zeros((4, cat_cap + 1, nmax + 1), dtype=complex)
    ring_bra = np.zeros((4, cat_cap + 1, nmax + 1), dtype=complex)

    sign = np.where(n % 2 == 0, 1.0, -1.0)
    signed = [base,
              base * sign[None, :],
              base * sign[:, None],
              base * sign[:, None] * sign[None, :]]   # st = (0,0), (0,1), (1,0), (1,1)

    for j0 in range(cat_cap + 1):
        cols = slice(j0, j0 + thermal_cap + 1)
        t_row = therm[j0]
        d_ring = cat_cap - j0
        for st in range(4):
            cs = signed[st]
            h_ket[st, : cat_cap + 1 - j0, cols] += cs[j0:, j0][:, None] * t_row[None, :]
            ring_ket[st, d_ring, cols] += cs[cat_cap, j0] * t_row
            if j0 + 1 <= cat_cap:
                h_bra[st, 1 : cat_cap + 1 - j0, cols] += cs[j0, j0 + 1 :][:, None] * t_row[None, :]
            if d_ring >= 1:
                ring_bra[st, d_ring, cols] += cs[j0, cat_cap] * t_row
    return h_ket, h_bra, ring_ket, ring_bra


def _chi_bases(x: np.ndarray, y: np.ndarray, chi_mode: str) -> tuple[np.ndarray, np.ndarray]:
    root2 = math.sqrt(2.0)
    minus = root2 * (x - 1j * y)
    plus = root2 * (x + 1j * y)
    if chi_mode == CHI_KERNEL:
        return minus, plus
    if chi_mode == CHI_PRINTED:
        return -plus, -minus
    if chi_mode == CHI_BROKEN:
        return plus, plus
    raise ValueError(f"unknown chi_mode {chi_mode!r}; expected one of {_CHI_MODES}")


def _powers(base: np.ndarray, dmax: int) -> np.ndarray:
    out = np.empty((dmax + 1,) + base.shape, dtype=complex)
    out[0] = 1.0
    for d in range(1, dmax + 1):
        out[d] = out[d - 1] * base
    return out


def _mode_factors(gamma: complex, q: float, one_minus_q: float, trunc: TruncationConfig,
                  x: np.ndarray, y: np.ndarray, chi_mode: str):
    """Envelope-absorbed factor sums M[st, p] for one mode, plus the ring estimate.

    The ring estimate is the magnitude of the outermost coherent band's signed
    contribution, sampled on a strided subset of the points; it is the
    standard last-retained-term proxy for the series tail.
    """
    cat_cap, thermal_cap = trunc.cat_cap, trunc.thermal_cap
    h_ket, h_bra, ring_ket, ring_bra = _mode_h_tables(gamma, q, one_minus_q, cat_cap, thermal_cap)
    # one batched real GEMM per chunk: the re/im planes of both tables stack
    # into (D+1, 16, N+1) against the Laguerre block (D+1, N+1, p)
    def stack(a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return np.ascontiguousarray(
            np.concatenate([a.real, a.imag, b.real, b.imag], axis=0).transpose(1, 0, 2))

    stacked_main = stack(h_ket, h_bra)
    stacked_ring = stack(ring_ket, ring_bra)
    npts = x.size
    m = np.empty((4, npts), dtype=complex)
    ring_max = 0.0

    def unpack(flat: np.ndarray, base: int) -> np.ndarray:
        return (flat[:, base : base + 4] + 1j * flat[:, base + 4 : base + 8]).transpose(1, 0, 2)

    # chunk so the Laguerre table stays ~200 MB
    nmax = cat_cap + thermal_cap
    chunk = max(32, int(2.5e7 / ((cat_cap + 1) * (nmax + 1))))
    for lo in range(0, npts, chunk):
        sl = slice(lo, min(lo + chunk, npts))
        xs, ys = x[sl], y[sl]
        w = 2.0 * (xs * xs + ys * ys)
        lag = laguerre_envelope_table(nmax, cat_cap, w)      # (d, N, p), includes e^{-w/2}
        ket_base, bra_base = _chi_bases(xs, ys, chi_mode)
        pow_ket = _powers(ket_base, cat_cap)
        pow_bra = _powers(bra_base, cat_cap)
        flat = np.matmul(stacked_main, lag)                  # (D+1, 16, p)
        m[:, sl] = (np.einsum("sdp,dp->sp", unpack(flat, 0), pow_ket)
                    + np.einsum("sdp,dp->sp", unpack(flat, 8), pow_bra))
        # tail proxy on a strided subsample of the chunk
        sub = slice(0, xs.size, max(1, xs.size // 32))
        flat_ring = np.matmul(stacked_ring, lag[:, :, sub])
        ring = (np.einsum("sdp,dp->sp", unpack(flat_ring, 0), pow_ket[:, sub])
                + np.einsum("sdp,dp->sp", unpack(flat_ring, 8), pow_bra[:, sub]))
        ring_max = max(ring_max, float(np.max(np.abs(ring), initial=0.0)))
    return m, ring_max


def _prefactor(spec: BellCatSpec, params: ThermalParams) -> float:
    a2 = abs(spec.alpha) ** 2
    log_denominator = 2.0 * a2 + math.log1p(spec.sigma * math.exp(-4.0 * a2))
    return (params.one_minus_exp1 * params.one_minus_exp2
            * math.exp(-log_denominator) / (2.0 * math.pi**2))


@dataclass
class ModeFactorization:
    """Per-mode factor tables of the Wigner series on a product point set.

    The Wigner values on {mode-1 points} x {mode-2 points} are
    prefactor * [(M1[0] M2[0] + M1[3] M2[3]) + sigma (M1[1] M2[1] + M1[2] M2[2])]
    with the Gaussian envelope already inside the tables.  Outer-product
    blocks are formed as rank-4 real matrix products.
    """

    prefactor: float
    sigma: int
    m1: np.ndarray = field(repr=False)   # (4, P1) complex
    m2: np.ndarray = field(repr=False)   # (4, P2) complex
    ring_bound: float                    # absolute tail bound from the outermost bands
    epsilon: float
    trunc: TruncationConfig

    def combine_block(self, rows: slice | None = None) -> tuple[np.ndarray, np.ndarray]:
        """(real, imag) parts of the W block over (mode-1 rows) x (all mode-2 points)."""
        m1 = self.m1[:, rows] if rows is not None else self.m1
        a_re = np.ascontiguousarray(m1.real.T)               # (P1, 4)
        a_im = np.ascontiguousarray(m1.imag.T)
        scale = self.prefactor * np.array([1.0, self.sigma, self.sigma, 1.0])
        b = self.m2 * scale[:, None]
        b_re = np.ascontiguousarray(b.real)                  # (4, P2)
        b_im = np.ascontiguousarray(b.imag)
        w_re = a_re @ b_re - a_im @ b_im
        w_im = a_re @ b_im + a_im @ b_re
        return w_re, w_im

    def combine(self, rows: slice | None = None) -> np.ndarray:
        """Complex W block over (rows of mode 1) x (all of mode 2)."""
        w_re, w_im = self.combine_block(rows)
        return w_re + 1j * w_im

    def combine_paired(self) -> np.ndarray:
        """Complex W at paired points (mode-1 point i with mode-2 point i)."""
        even = self.m1[0] * self.m2[0] + self.m1[3] * self.m2[3]
        odd = self.m1[1] * self.m2[1] + self.m1[2] * self.m2[2]
        return self.prefactor * (even + self.sigma * odd)


def factorize(spec: BellCatSpec, params: ThermalParams,
              mode1_points: tuple[np.ndarray, np.ndarray],
              mode2_points: tuple[np.ndarray, np.ndarray],
              trunc: TruncationConfig | None = None,
              chi_mode: str = CHI_KERNEL) -> ModeFactorization:
    """Build the per-mode factor tables of the thermal Wigner series."""
    trunc = (trunc or TruncationConfig()).resolve(spec, params)
    x1, y1 = (np.asarray(v, dtype=float) for v in mode1_points)
    x2, y2 = (np.asarray(v, dtype=float) for v in mode2_points)
    m1, ring1 = _mode_factors(spec.alpha, params.exp1, params.one_minus_exp1, trunc, x1, y1, chi_mode)
    gamma2 = spec.k * spec.alpha
    m2, ring2 = _mode_factors(gamma2, params.exp2, params.one_minus_exp2, trunc, x2, y2, chi_mode)
    pref = _prefactor(spec, params)
    scale1 = float(np.max(np.sum(np.abs(m1), axis=0))) if m1.size else 0.0
    scale2 = float(np.max(np.sum(np.abs(m2), axis=0))) if m2.size else 0.0
    ring_bound = pref * (ring1 * scale2 + scale1 * ring2)
    fac = ModeFactorization(prefactor=pref, sigma=spec.sigma, m1=m1, m2=m2,
                            ring_bound=ring_bound, epsilon=trunc.epsilon, trunc=trunc)
    _check_tail(fac)
    return fac


def _check_tail(fac: ModeFactorization) -> None:
    # the ring tables hold absolute values of every outermost-band term, so
    # this is a conservative overestimate of the mass the caps left out
    if fac.ring_bound > 100.0 * fac.epsilon:
        raise TruncationError(
            f"outermost-band bound {fac.ring_bound:.3e} exceeds the tail tolerance "
            f"{fac.epsilon:g} (caps {fac.trunc.cat_cap}/{fac.trunc.thermal_cap})"
        )


def _to_real(values: np.ndarray, context: str) -> tuple[np.ndarray, float]:
    max_resid = float(np.max(np.abs(values.imag), initial=0.0))
    if max_resid > IMAG_RESIDUE_TOL:
        # the global bound failed; apply the pointwise |im| <= tol (1 + |re|)
        resid = np.abs(values.imag)
        bound = IMAG_RESIDUE_TOL * (1.0 + np.abs(values.real))
        if np.any(resid > bound):
            worst = float(np.max(resid / bound))
            raise ImaginaryResidueError(
                f"{context}: imaginary residue exceeds {IMAG_RESIDUE_TOL:g}*(1+|re|) "
                f"by a factor {worst:.3g}; the term sum lost its Hermitian pairing"
            )
    return np.ascontiguousarray(values.real), max_resid


def wigner_values(spec: BellCatSpec, params: ThermalParams,
                  x1, y1, x2, y2,
                  trunc: TruncationConfig | None = None,
                  chi_mode: str = CHI_KERNEL) -> np.ndarray:
    """Dimensionless thermal Wigner function at paired coordinate arrays."""
    arrays = [np.atleast_1d(np.asarray(v, dtype=float)) for v in (x1, y1, x2, y2)]
    if len({a.shape for a in arrays}) != 1:
        raise ValueError("coordinate arrays must share one shape")
    fac = factorize(spec, params, (arrays[0], arrays[1]), (arrays[2], arrays[3]),
                    trunc=trunc, chi_mode=chi_mode)
    values, _ = _to_real(fac.combine_paired(), "wigner_values")
    return values


def wigner_point(spec: BellCatSpec, params: ThermalParams, pt: PhasePoint,
                 trunc: TruncationConfig | None = None,
                 chi_mode: str = CHI_KERNEL) -> float:
    """W at a single phase-space point via the closed-form series."""
    return float(wigner_values(spec, params, pt.x1, pt.y1, pt.x2, pt.y2,
                               trunc=trunc, chi_mode=chi_mode)[0])


# ---------------------------------------------------------------------------
# grids
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GridAxis:
    name: str
    minimum: float
    maximum: float
    count: int

    def __post_init__(self):
        if self.name not in _COORDS:
            raise ValueError(f"axis name must be one of {_COORDS}, got {self.name!r}")
        if self.count < 2:
            raise ValueError("axis count must be >= 2")
        if not (self.maximum > self.minimum):
            raise ValueError("axis maximum must exceed minimum")

    def values(self) -> np.ndarray:
        return np.linspace(self.minimum, self.maximum, self.count)


@dataclass(frozen=True)
class SliceDescriptor:
    """Which two of the four phase-space coordinates vary, and the fixed values of the rest."""

    axes: tuple[GridAxis, GridAxis]
    fixed: dict[str, float]

    def __post_init__(self):
        names = [a.name for a in self.axes]
        if len(set(names)) != 2:
            raise ValueError("slice axes must name two distinct coordinates")
        expected = set(_COORDS) - set(names)
        if set(self.fixed) != expected:
            raise ValueError(f"fixed coordinates must be exactly {sorted(expected)}")
        for name, value in self.fixed.items():
            if not math.isfinite(value):
                raise ValueError(f"fixed value for {name} must be finite")

    @classmethod
    def centered(cls, names: tuple[str, str], half_width: float, count: int,
                 fixed: dict[str, float] | None = None) -> "SliceDescriptor":
        axes = tuple(GridAxis(n, -half_width, half_width, count) for n in names)
        others = set(_COORDS) - set(names)
        base = {name: 0.0 for name in others}
        base.update(fixed or {})
        return cls(axes=axes, fixed=base)


@dataclass
class WignerGrid:
    """Real Wigner values on a 2D slice, plus evaluation metadata."""

    slice_: SliceDescriptor
    values: np.ndarray = field(repr=False)
    spec: BellCatSpec
    params: ThermalParams
    trunc: TruncationConfig
    stats: dict

    def axis_values(self, index: int) -> np.ndarray:
        return self.slice_.axes[index].values()

    def iter_rows(self):
        """Yield (x1, y1, x2, y2, w) per grid point in axis-major order."""
        a0, a1 = self.slice_.axes
        v0, v1 = a0.values(), a1.values()
        coords = dict(self.slice_.fixed)
        for i, u in enumerate(v0):
            for j, w in enumerate(v1):
                coords[a0.name] = float(u)
                coords[a1.name] = float(w)
                yield (coords["x1"], coords["y1"], coords["x2"], coords["y2"],
                       float(self.values[i, j]))


def wigner_grid(spec: BellCatSpec, params: ThermalParams, slice_: SliceDescriptor,
                trunc: TruncationConfig | None = None,
                chi_mode: str = CHI_KERNEL) -> WignerGrid:
    """Evaluate the Wigner function over a 2D slice via the factorized contraction.

    The mode tables are built once per distinct per-mode point set, so a slice
    whose axes split across the two modes costs O(count1 + count2) mode sums
    followed by a rank-4 outer contraction.
    """
    t0 = time.perf_counter()
    a0, a1 = slice_.axes
    v0, v1 = a0.values(), a1.values()
    fixed = slice_.fixed
    mode0, mode1_ = _MODE_OF[a0.name], _MODE_OF[a1.name]

    def fixed_pair(mode: int) -> tuple[float, float]:
        names = ("x1", "y1") if mode == 1 else ("x2", "y2")
        return fixed[names[0]], fixed[names[1]]

    if mode0 != mode1_:
        # axes split across the modes: outer product of two 1D tables
        pts = {mode0: _axis_points(a0.name, v0, fixed), mode1_: _axis_points(a1.name, v1, fixed)}
        fac = factorize(spec, params, pts[1], pts[2], trunc=trunc, chi_mode=chi_mode)
        w_complex = fac.combine() if mode0 == 1 else fac.combine().T
    else:
        # both axes live in one mode: that mode gets the full 2D point set
        grid0, grid1 = np.meshgrid(v0, v1, indexing="ij")
        pair = {a0.name: grid0.ravel(), a1.name: grid1.ravel()}
        names = ("x1", "y1") if mode0 == 1 else ("x2", "y2")
        varying = (pair.get(names[0], np.full(grid0.size, fixed.get(names[0], 0.0))),
                   pair.get(names[1], np.full(grid0.size, fixed.get(names[1], 0.0))))
        other_mode = 2 if mode0 == 1 else 1
        ox, oy = fixed_pair(other_mode)
        single = (np.array([ox]), np.array([oy]))
        if mode0 == 1:
            fac = factorize(spec, params, varying, single, trunc=trunc, chi_mode=chi_mode)
            w_complex = fac.combine()[:, 0].reshape(v0.size, v1.size)
        else:
            fac = factorize(spec, params, single, varying, trunc=trunc, chi_mode=chi_mode)
            w_complex = fac.combine()[0, :].reshape(v0.size, v1.size)

    values, max_resid = _to_real(w_complex, "wigner_grid")
    stats = {
        "max_imag_residue": max_resid,
        "ring_bound": fac.ring_bound,
        "n_points": int(values.size),
        "cat_cap": fac.trunc.cat_cap,
        "thermal_cap": fac.trunc.thermal_cap,
        "seconds": time.perf_counter() - t0,
    }
    return WignerGrid(slice_=slice_, values=values, spec=spec, params=params,
                      trunc=fac.trunc, stats=stats)


def _axis_points(name: str, values: np.ndarray, fixed: dict[str, float]):
    if name in ("x1", "x2"):
        other = "y1" if name == "x1" else "y2"
        return values, np.full(values.size, fixed[other])
    other = "x1" if name == "y1" else "x2"
    return np.full(values.size, fixed[other]), values


# ---------------------------------------------------------------------------
# Fock-kernel oracle
# ---------------------------------------------------------------------------


def hermite_functions(nmax: int, xi: np.ndarray) -> np.ndarray:
    """Normalized oscillator eigenfunctions psi_n(xi), n = 0..nmax.

    Two-term recurrence on the functions themselves (never the bare Hermite
    polynomials), so magnitudes stay bounded for n of a few hundred.
    """
    xi = np.asarray(xi, dtype=float)
    out = np.empty((nmax + 1,) + xi.shape)
    out[0] = math.pi ** -0.25 * np.exp(-0.5 * xi * xi)
    if nmax == 0:
        return out
    out[1] = math.sqrt(2.0) * xi * out[0]
    for n in range(1, nmax):
        out[n + 1] = (math.sqrt(2.0 / (n + 1)) * xi * out[n]
                      - math.sqrt(n / (n + 1)) * out[n - 1])
    return out


def fock_wigner_kernels(nmax: int, x: np.ndarray, y: np.ndarray,
                        tol: float = 1e-10, max_doublings: int = 8) -> np.ndarray:
    """Dimensionless one-mode Wigner kernels K[j, l](x, y) of |j><l|, j, l <= nmax.

    Direct trapezoid quadrature of
        K = (1/2 pi) int ds e^{i s y} psi_j(x - s/2) psi_l(x + s/2)
    refined by doubling until two successive refinements agree below `tol`.
    Returns shape (npoints, nmax+1, nmax+1).
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if x.shape != y.shape:
        raise ValueError("x and y must share a shape")
    turning = math.sqrt(2.0 * nmax + 1.0)
    half_range = 2.0 * (turning + float(np.max(np.abs(x), initial=0.0))) + 10.0
    freq = turning + float(np.max(np.abs(y), initial=0.0)) + 1.0
    npts = 256
    while npts < half_range * freq / math.pi * 1.3:
        npts *= 2

    prev = None
    for _ in range(max_doublings + 1):
        current = _kernel_level(nmax, x, y, half_range, npts)
        if prev is not None and float(np.max(np.abs(current - prev))) < tol:
            return current
        prev = current
        npts *= 2
    raise QuadratureError(
        f"Fock kernel quadrature did not converge to {tol:g} by {npts // 2} nodes"
    )


def _kernel_level(nmax: int, x: np.ndarray, y: np.ndarray, half_range: float, npts: int) -> np.ndarray:
    s = np.linspace(-half_range, half_range, npts + 1)
    weight = np.full(npts + 1, 2.0 * half_range / npts)
    weight[0] *= 0.5
    weight[-1] *= 0.5
    out = np.empty((x.size, nmax + 1, nmax + 1), dtype=complex)
    chunk = max(1, int(4e6 / ((nmax + 1) * (npts + 1))))
    for lo in range(0, x.size, chunk):
        sl = slice(lo, min(lo + chunk, x.size))
        xs, ys = x[sl], y[sl]
        psi_ket = hermite_functions(nmax, xs[:, None] - 0.5 * s[None, :])
        psi_bra = hermite_functions(nmax, xs[:, None] + 0.5 * s[None, :])
        phase = np.exp(1j * s[None, :] * ys[:, None]) * weight[None, :]
        for b in range(xs.size):
            weighted = psi_ket[:, b, :] * phase[b][None, :]
            out[lo + b] = (weighted.real @ psi_bra[:, b, :].T
                           + 1j * (weighted.imag @ psi_bra[:, b, :].T)) / (2.0 * math.pi)
    return out


_ORACLE_MASS_EPSILON = 1e-9


def oracle_cutoff(spec: BellCatSpec, params: ThermalParams) -> int:
    """Per-mode Fock cutoff the oracle needs to hold ~1e-9 of the state's mass."""
    from .density import thermal_levels

    return default_cat_cap(spec, params) + thermal_levels(params, _ORACLE_MASS_EPSILON)


def wigner_oracle_values(spec: BellCatSpec, params: ThermalParams,
                         x1, y1, x2, y2,
                         cutoff: int | None = None,
                         kernel_tol: float = 1e-10,
                         kernels: tuple[np.ndarray, np.ndarray] | None = None) -> np.ndarray:
    """Oracle W values: quadrature kernels contracted with operator-route density blocks.

    `kernels` may carry precomputed (k1, k2) tables for these points (they
    depend only on the cutoff and the coordinates, so states sharing both can
    share them).
    """
    arrays = [np.atleast_1d(np.asarray(v, dtype=float)) for v in (x1, y1, x2, y2)]
    if cutoff is None:
        cutoff = oracle_cutoff(spec, params)
    weights, blocks1, blocks2 = mode_thermal_blocks(spec, params, cutoff)
    if kernels is not None:
        k1, k2 = kernels
        if k1.shape[1] != cutoff + 1:
            raise ValueError(f"precomputed kernels sized for nmax {k1.shape[1] - 1}, need {cutoff}")
    else:
        k1 = fock_wigner_kernels(cutoff, arrays[0], arrays[1], tol=kernel_tol)
        k2 = fock_wigner_kernels(cutoff, arrays[2], arrays[3], tol=kernel_tol)
    total = np.zeros(arrays[0].size, dtype=complex)
    for s in (0, 1):
        for t in (0, 1):
            c1 = np.einsum("pnm,nm->p", k1, blocks1[s][t])
            c2 = np.einsum("pnm,nm->p", k2, blocks2[s][t])
            total += weights[s, t] * c1 * c2
    values, _ = _to_real(total, "wigner_oracle")
    return values


def wigner_point_oracle(spec: BellCatSpec, params: ThermalParams, pt: PhasePoint,
                        cutoff: int | None = None, kernel_tol: float = 1e-10) -> float:
    """Oracle W at one point; arbitrates the series' sign and chi conventions."""
    return float(wigner_oracle_values(spec, params, pt.x1, pt.y1, pt.x2, pt.y2,
                                      cutoff=cutoff, kernel_tol=kernel_tol)[0])


# ---------------------------------------------------------------------------
# zero-temperature closed form (coherent-state algebra; independent of both paths)
# ---------------------------------------------------------------------------


def closed_form_zero_temperature(spec: BellCatSpec, x1, y1, x2, y2) -> np.ndarray:
    """W of the pure Bell-Cat state from the coherent cross-Wigner identity.

    W_{|u><w|}(x, y) = (1/pi) e^{-x^2-y^2} e^{-(|u|^2+|w|^2)/2}
                       exp(sqrt2 u zbar + sqrt2 conj(w) z - u conj(w)),
    z = x + i y.  Summing the four branch pairs of |psi><psi| gives the state.
    """
    arrays = [np.atleast_1d(np.asarray(v, dtype=float)) for v in (x1, y1, x2, y2)]
    z1 = arrays[0] + 1j * arrays[1]
    z2 = arrays[2] + 1j * arrays[3]
    alpha, k, sigma = spec.alpha, spec.k, spec.sigma
    norm_sq = 1.0 / (2.0 * (1.0 + sigma * math.exp(-4.0 * abs(alpha) ** 2)))

    def cross(u: complex, w: complex, z: np.ndarray) -> np.ndarray:
        return np.exp(math.sqrt(2.0) * u * np.conj(z) + math.sqrt(2.0) * np.conj(w) * z
                      - u * np.conj(w) - 0.5 * (abs(u) ** 2 + abs(w) ** 2))

    total = np.zeros(z1.shape, dtype=complex)
    for bra_sign in (1, -1):
        for ket_sign in (1, -1):
            weight = sigma ** ((ket_sign < 0) + (bra_sign < 0))
            total += weight * (cross(ket_sign * alpha, bra_sign * alpha, z1)
                               * cross(ket_sign * k * alpha, bra_sign * k * alpha, z2))
    envelope = np.exp(-(np.abs(z1) ** 2 + np.abs(z2) ** 2))
    values = norm_sq / math.pi**2 * envelope * total
    out, _ = _to_real(values, "closed_form_zero_temperature")
    return out
