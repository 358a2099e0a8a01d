import cmath
import math

import numpy as np
import pytest

from gbtkit.errors import ImproperTransferFunction, NyquistExceeded, UnstablePlant
from gbtkit.gbtcore import DiscretizationSpec, gbt_substitute
from gbtkit.ratfun import RationalFunction
from gbtkit.response import lpf_plant
from gbtkit.simkit import (
    DifferenceEquation,
    compensate_delay,
    realize,
    sine_probe,
    step,
)

from oracles import F_C, F_SAMP, T, W_C, lpf_discrete

PLANT = lpf_plant(W_C)


def tustin_lpf():
    return gbt_substitute(PLANT, DiscretizationSpec.from_alpha(0.5, F_SAMP))


class TestDifferenceEquation:
    def test_pure_gain(self):
        deq = DifferenceEquation([2.5], [])
        assert deq.step(2.0) == 5.0
        assert deq.step(-1.0) == -2.5

    def test_one_sample_delay(self):
        deq = DifferenceEquation([0.0, 1.0], [])
        assert deq.step(3.0) == 0.0
        assert deq.step(7.0) == 3.0

    def test_accumulator(self):
        # y(n) = x(n) + y(n-1)
        deq = DifferenceEquation([1.0], [-1.0])
        outs = [deq.step(1.0) for _ in range(5)]
        assert outs == [1.0, 2.0, 3.0, 4.0, 5.0]

    def test_reset(self):
        deq = DifferenceEquation([1.0], [-1.0])
        deq.step(1.0)
        deq.step(1.0)
        deq.reset()
        assert deq.step(1.0) == 1.0

    def test_module_level_step(self):
        deq = DifferenceEquation([3.0], [])
        assert step(deq, 2.0) == 6.0


class TestRealize:
    def test_first_order_coefficients(self):
        # (0.3 + 0.5 z) / (0.2 + 2 z): b = [0.25, 0.15], a = [0.1]
        deq = realize(RationalFunction([0.3, 0.5], [0.2, 2.0]))
        assert deq.in_coeffs == pytest.approx((0.25, 0.15))
        assert deq.out_coeffs == pytest.approx((0.1,))

    def test_improper_rejected(self):
        with pytest.raises(ImproperTransferFunction):
            realize(RationalFunction([1, 2, 3], [1, 1]))

    def test_impulse_response_matches_long_division(self):
        # H(z) = 1 / (z - 0.5) -> h = [0, 1, 0.5, 0.25, ...]
        deq = realize(RationalFunction([1.0], [-0.5, 1.0]))
        h = [deq.step(1.0 if n == 0 else 0.0) for n in range(6)]
        assert h == pytest.approx([0.0, 1.0, 0.5, 0.25, 0.125, 0.0625])

    def test_dc_gain_preserved(self):
        ztf = tustin_lpf()
        deq = realize(ztf)
        out = 0.0
        for _ in range(400):
            out = deq.step(1.0)
        assert out == pytest.approx(ztf(1.0).real, abs=1e-9)


class TestSineProbe:
    def test_matches_unit_circle_evaluation(self):
        ztf = tustin_lpf()
        for f in (500.0, 0.75 * F_C, F_C):
            probe = sine_probe(realize(ztf), f, F_SAMP)
            expect = ztf(cmath.exp(1j * 2 * math.pi * f * T))
            assert probe.mag_db == pytest.approx(
                20 * math.log10(abs(expect)), abs=1e-6)
            assert probe.phase_deg == pytest.approx(
                math.degrees(cmath.phase(expect)), abs=1e-4)
            assert probe.residual < 1e-8

    def test_frozen_reference_point(self):
        # alpha = 0.5 at 75% of the corner frequency, reconstruction excluded
        probe = sine_probe(realize(tustin_lpf()), 0.75 * F_C, F_SAMP)
        assert probe.mag_db == pytest.approx(-3.4459, abs=1e-4)
        assert probe.phase_deg == pytest.approx(-47.738, abs=1e-3)

    def test_probe_excludes_reconstruction_model(self):
        f = 0.75 * F_C
        probe = sine_probe(realize(tustin_lpf()), f, F_SAMP)
        with_zoh = lpf_discrete(0.5, f, zoh=True)
        without = lpf_discrete(0.5, f, zoh=False)
        assert probe.mag_db == pytest.approx(20 * math.log10(abs(without)), abs=1e-6)
        assert abs(probe.mag_db - 20 * math.log10(abs(with_zoh))) > 0.5

    def test_unstable_realization_rejected(self):
        wct = W_C * T
        euler_fwd = RationalFunction([wct, 0.0], [wct - 1.0, 1.0])  # pole at 1 - wct
        with pytest.raises(UnstablePlant):
            sine_probe(realize(euler_fwd), 1000.0, F_SAMP)

    def test_out_of_band_rejected(self):
        with pytest.raises(NyquistExceeded):
            sine_probe(realize(tustin_lpf()), 6000.0, F_SAMP)

    def test_amplitude_invariance(self):
        a = sine_probe(realize(tustin_lpf()), 1000.0, F_SAMP, amplitude=1.0)
        b = sine_probe(realize(tustin_lpf()), 1000.0, F_SAMP, amplitude=0.01)
        assert a.mag_db == pytest.approx(b.mag_db, abs=1e-9)
        assert a.phase_deg == pytest.approx(b.phase_deg, abs=1e-9)


class TestCompensateDelay:
    def test_removes_known_delay(self):
        probe = sine_probe(realize(tustin_lpf()), F_C, F_SAMP)
        t_delay = 470e-9
        comp = compensate_delay(probe, t_delay)
        assert comp.mag_db == probe.mag_db
        assert comp.phase_deg - probe.phase_deg == pytest.approx(
            360.0 * F_C * t_delay, rel=1e-12)

    def test_zero_delay_is_identity(self):
        probe = sine_probe(realize(tustin_lpf()), 1000.0, F_SAMP)
        assert compensate_delay(probe, 0.0) == probe

    def test_negative_delay_rejected(self):
        probe = sine_probe(realize(tustin_lpf()), 1000.0, F_SAMP)
        with pytest.raises(ValueError):
            compensate_delay(probe, -1e-9)
