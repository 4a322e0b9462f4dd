import math

import numpy as np
import pytest

from bellcat.errors import NormalizationError
from bellcat.negativity import (
    QuadratureSpec,
    default_half_width,
    default_nodes,
    integrate_negativity,
    temperature_sweep,
)
from bellcat.states import BellCatSpec
from bellcat.tfd import thermal_params
from bellcat.wigner import fock_wigner_kernels

OMEGA = 2 * math.pi * 5.5e9


def params_for(T):
    return thermal_params(T, OMEGA)


class TestQuadratureSpec:
    def test_validation(self):
        with pytest.raises(ValueError):
            QuadratureSpec(nodes=4)
        with pytest.raises(ValueError):
            QuadratureSpec(half_width=-1.0)
        with pytest.raises(ValueError):
            QuadratureSpec(rule="monte-carlo")
        with pytest.raises(ValueError):
            QuadratureSpec(inner_density=0.0)

    def test_defaults_reduce_to_cold_values(self):
        spec = BellCatSpec.from_label("phi-minus", 1.0)
        params = params_for(0.0)
        L = default_half_width(spec, params)
        assert L == pytest.approx(math.sqrt(2) + 7.0, abs=1e-12)
        assert default_nodes(spec, params, L) >= 48

    def test_half_width_floor_enforced(self):
        spec = BellCatSpec.from_label("phi-plus", 2.0)
        with pytest.raises(ValueError):
            integrate_negativity(spec, params_for(0.0), QuadratureSpec(nodes=16, half_width=5.0))


class TestVacuumKernelSanity:
    def test_gaussian_kernel_has_no_negative_volume(self):
        # 2D quadrature of the vacuum kernel: I- = 0, so delta = nu = 0
        nodes, w = np.polynomial.legendre.leggauss(48)
        L = 8.0
        x, y = np.meshgrid(L * nodes, L * nodes, indexing="ij")
        k = fock_wigner_kernels(0, x.ravel(), y.ravel())[:, 0, 0].real
        wts = np.multiply.outer(L * w, L * w).ravel()
        i_plus = float(np.sum(np.maximum(k * wts, 0.0)))
        i_minus = float(np.sum(np.maximum(-k * wts, 0.0)))
        # the quadrature of the kernel leaves only roundoff-scale negatives
        assert i_minus < 1e-14
        assert i_plus == pytest.approx(1.0, abs=1e-10)
        delta = 2 * i_minus / (i_plus - i_minus)
        nu = 2 * i_minus / (i_plus + i_minus)
        assert delta < 1e-13 and nu < 1e-13


class TestIntegration:
    def test_cold_phi_minus(self):
        spec = BellCatSpec.from_label("phi-minus", 1.0)
        r = integrate_negativity(spec, params_for(0.01))
        assert r.nu > 0.1
        assert abs(r.norm_check - 1.0) < 1e-3
        assert abs(r.nu - r.delta / (1.0 + r.delta)) < 1e-6 * r.nu
        assert abs(r.delta - 2.0 * r.i_minus) <= 2.0 * r.i_minus * 2e-3 + 1e-12

    def test_hot_negativity_collapses(self):
        spec = BellCatSpec.from_label("phi-minus", 1.0)
        cold = integrate_negativity(spec, params_for(0.01))
        hot = integrate_negativity(spec, params_for(2.0))
        assert hot.nu < 0.1 * cold.nu

    def test_node_doubling_stability(self):
        # delta moves by < 1e-3 relative when the Gauss-Legendre nodes double,
        # one representative case per state
        for label in ("phi-minus", "psi-plus", "phi-plus", "psi-minus"):
            spec = BellCatSpec.from_label(label, 1.0)
            params = params_for(0.3)
            r1 = integrate_negativity(spec, params)
            r2 = integrate_negativity(spec, params,
                                      QuadratureSpec(nodes=2 * r1.nodes, half_width=r1.half_width))
            assert abs(r1.delta - r2.delta) < 1e-3 * abs(r2.delta)

    def test_full_refinement_stability(self):
        # doubling the inner density as well keeps delta within the same budget
        spec = BellCatSpec.from_label("phi-minus", 1.0)
        params = params_for(0.3)
        r1 = integrate_negativity(spec, params)
        refined = QuadratureSpec(nodes=2 * r1.nodes, half_width=r1.half_width,
                                 inner_density=2.0 * r1.inner_nodes / (2.0 * r1.half_width))
        r2 = integrate_negativity(spec, params, refined)
        assert abs(r1.delta - r2.delta) < 1e-3 * abs(r2.delta)

    def test_mode2_flip_invariance(self):
        params = params_for(0.3)
        a = integrate_negativity(BellCatSpec.from_label("phi-plus", 1 + 1j), params)
        b = integrate_negativity(BellCatSpec.from_label("psi-plus", 1 + 1j), params)
        assert abs(a.nu - b.nu) < 1e-9

    def test_normalization_failure_raises(self):
        spec = BellCatSpec.from_label("phi-minus", 1.0)
        with pytest.raises(NormalizationError):
            # legal but far-too-coarse rule: the box misses thermal mass
            integrate_negativity(spec, params_for(2.0), QuadratureSpec(nodes=16, half_width=6.0))


class TestSweep:
    def test_monotonic_validation(self):
        spec = BellCatSpec.from_label("phi-minus", 1.0)
        with pytest.raises(ValueError):
            temperature_sweep(spec, [0.5, 0.2], OMEGA)
        with pytest.raises(ValueError):
            temperature_sweep(spec, [-0.1, 0.2], OMEGA)

    def test_entries_cover_failures(self):
        # a box sized for the cold state loses thermal mass at 2 K: the hot
        # entry records its failure and the sweep continues
        spec = BellCatSpec.from_label("phi-minus", 1.0)
        quad = QuadratureSpec(half_width=8.4)
        entries = temperature_sweep(spec, [0.01, 2.0], OMEGA, quad=quad)
        assert entries[0].ok
        assert not entries[1].ok and "NormalizationError" in entries[1].error

    def test_single_temperature_matches_direct(self):
        spec = BellCatSpec.from_label("phi-minus", 1.0)
        entries = temperature_sweep(spec, [0.05], OMEGA)
        direct = integrate_negativity(spec, params_for(0.05))
        assert entries[0].result.nu == direct.nu
        assert entries[0].result.delta == direct.delta

    def test_zero_temperature_entry_uses_flag(self):
        spec = BellCatSpec.from_label("phi-minus", 1.0)
        entries = temperature_sweep(spec, [0.0, 0.05], OMEGA)
        assert entries[0].ok
        direct = integrate_negativity(spec, params_for(0.0))
        assert entries[0].result.nu == direct.nu
