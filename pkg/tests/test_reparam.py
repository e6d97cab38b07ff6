"""Sinusoidal box self-map, pulled-back gates, and the anchored objective."""

import math

import numpy as np
import pytest

from sinelevel import (
    AugmentedObjective,
    AugmentedPoint,
    BoxDomain,
    ConstrainedProblem,
    DeformationParams,
    FrequencyVector,
    GateMode,
    Point,
    R_MIN_DEFAULT,
    anchor_term,
    augmented_objective,
    make_gate_function,
    pulled_back_gate,
    transform_point,
)
from sinelevel.reparam import transform_array

BOX = BoxDomain((-1.5,), (1.5,))


def test_transform_reference_value():
    # r=0.5 makes the scale exactly 4; sin(1.2) then drives the rescale.
    # Extended-precision value: 1.39805862895083952..., float path is
    # within 2 ulp of its correct rounding.
    y = transform_point(Point([0.3]), FrequencyVector([0.5]), BOX)
    assert abs(y[0] - 1.3980586289508395) <= 5e-16
    assert math.sin(1.2) == 0.9320390859672263


def test_origin_maps_to_midpoint_for_every_frequency():
    # sin(0) = 0 regardless of the scale, so x = 0 always lands mid-box
    for r in (0.05, 0.31, 1.0, 2.7, 10.0):
        assert transform_point(Point([0.0]), FrequencyVector([r]), BOX)[0] == 0.0
        asym = transform_point(
            Point([0.0]), FrequencyVector([r]), BoxDomain((1.0,), (4.0,))
        )
        assert asym[0] == 2.5


def test_sine_peak_reaches_upper_bound_exactly():
    # x = pi/4 with scale 2 puts the argument at pi/2; the affine rescale
    # of sin = 1.0 reproduces the endpoint bit-for-bit
    box = BoxDomain((0.0,), (math.pi,))
    y = transform_point(Point([math.pi / 4]), FrequencyVector([1.0]), box)
    assert y[0] == math.pi


def test_transform_stays_in_closed_box():
    rng = np.random.default_rng(99)
    for _ in range(1000):
        a = float(rng.uniform(-10.0, 9.0))
        b = a + float(rng.uniform(0.05, 10.0))
        box = BoxDomain((a,), (b,))
        x = Point([float(rng.uniform(a, b))])
        r = FrequencyVector([float(rng.uniform(0.05, 10.0))])
        y = transform_point(x, r, box)
        assert a <= y[0] <= b


def test_transform_multidimensional_is_coordinatewise():
    box = BoxDomain((-1.5, 1.0), (1.5, 4.0))
    y = transform_point(Point([0.3, 0.0]), FrequencyVector([0.5, 1.0]), box)
    y0 = transform_point(Point([0.3]), FrequencyVector([0.5]), BOX)
    assert y[0] == y0[0]
    assert y[1] == 2.5


def test_frequency_floor_rejected_not_clamped():
    with pytest.raises(ValueError, match="floor"):
        transform_point(Point([0.0]), FrequencyVector([0.04]), BOX)
    # explicit smaller floor admits the same frequency
    y = transform_point(Point([0.0]), FrequencyVector([0.04]), BOX, r_min=0.01)
    assert y[0] == 0.0
    assert R_MIN_DEFAULT == 0.05


def test_transform_dimension_mismatch():
    with pytest.raises(ValueError, match="dimension"):
        transform_point(Point([0.0, 1.0]), FrequencyVector([1.0]), BOX)
    with pytest.raises(ValueError, match="dimension"):
        transform_point(Point([0.0]), FrequencyVector([1.0, 2.0]), BOX)


def test_transform_array_matches_scalar_path():
    # The vectorized path computes the scale with exp2, the scalar path
    # with pow; at small r a 1 ulp scale difference is amplified by the
    # sine argument, so agreement is width-relative (measured max ~5e-11)
    rng = np.random.default_rng(777)
    n = 2000
    lo = rng.uniform(-10.0, 9.0, n)
    hi = lo + rng.uniform(0.05, 10.0, n)
    xs = rng.uniform(lo, hi)
    rs = rng.uniform(0.05, 10.0, n)
    arr = transform_array(xs, rs, lo, hi)
    assert np.all(arr >= lo) and np.all(arr <= hi)
    for i in range(n):
        y = transform_point(
            Point([float(xs[i])]),
            FrequencyVector([float(rs[i])]),
            BoxDomain((float(lo[i]),), (float(hi[i]),)),
        )
        assert abs(y[0] - arr[i]) <= 1e-9 * (hi[i] - lo[i])


def test_pulled_back_gate_outside_band_is_zero():
    prob = ConstrainedProblem(lambda p: (p[0] - 1.0) ** 2, BOX)
    gate = make_gate_function(prob, DeformationParams(level=0.04), GateMode.RAW_OBJECTIVE)
    # transform sends 0.3 to ~1.398; (y-1)^2 = 0.1584... > 0.04, clipped gate 0
    u = pulled_back_gate(gate, Point([0.3]), FrequencyVector([0.5]), BOX)
    assert u == 0.0


def test_pulled_back_gate_inside_band_is_negative():
    prob = ConstrainedProblem(lambda p: p[0] * p[0], BOX)
    gate = make_gate_function(prob, DeformationParams(level=1.0), GateMode.RAW_OBJECTIVE)
    # x = 0 maps to the midpoint 0, f = 0 < 1, gate = 2*(0 - 1)
    u = pulled_back_gate(gate, Point([0.0]), FrequencyVector([1.0]), BOX)
    assert u == -2.0


def test_anchor_term_1d():
    box = BoxDomain((-2.0,), (2.0,))
    v = anchor_term(Point([1.0]), FrequencyVector([1.0]), box, rho=2.0)
    assert v == 2.0  # (0-1)^2 + (2-1)^2


def test_anchor_term_tied_counts_frequency_once():
    box = BoxDomain((-2.0, -2.0), (2.0, 2.0))
    r = FrequencyVector.tied_value(1.5, 2)
    v = anchor_term(Point([0.5, -0.5]), r, box, rho=2.0)
    assert v == 0.75  # 0.25 + 0.25 + one (2-1.5)^2


def test_anchor_term_free_counts_each_frequency():
    box = BoxDomain((-2.0, -2.0), (2.0, 2.0))
    r = FrequencyVector([1.5, 1.0], tied=False)
    v = anchor_term(Point([0.5, -0.5]), r, box, rho=2.0)
    assert v == 1.75  # 0.25 + 0.25 + 0.25 + 1.0


def test_anchor_term_center_override():
    v = anchor_term(
        Point([0.5]), FrequencyVector([1.0]), BOX, rho=2.0, center=Point([1.5])
    )
    assert v == 2.0  # (1.5-0.5)^2 + (2-1)^2


def test_anchor_term_dimension_mismatch():
    with pytest.raises(ValueError, match="dimension"):
        anchor_term(Point([0.0, 0.0]), FrequencyVector([1.0, 1.0]), BOX)


def test_augmented_objective_wiring():
    prob = ConstrainedProblem(lambda p: (p[0] - 1.0) ** 2, BOX)
    gate = make_gate_function(prob, DeformationParams(level=0.04), GateMode.RAW_OBJECTIVE)
    aug = AugmentedObjective(gate=gate, box=BOX)
    p = AugmentedPoint(Point([0.3]), FrequencyVector([0.5]))
    u = aug.gate_part(p)
    v = aug.anchor_part(p)
    assert u == 0.0
    assert v == (0.0 - 0.3) ** 2 + (2.0 - 0.5) ** 2
    assert augmented_objective(aug, p) == u + v


def test_augmented_objective_validation():
    gate = lambda p: -1.0
    with pytest.raises(ValueError, match="anchor"):
        AugmentedObjective(gate=gate, box=BOX, anchor=0.0)
    with pytest.raises(ValueError, match="center"):
        AugmentedObjective(gate=gate, box=BOX, center=Point([0.0, 0.0]))
