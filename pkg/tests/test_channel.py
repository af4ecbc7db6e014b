import io
import math

import numpy as np
import pytest

import oracles
from vlcsim.channel import (
    ChannelMatrix,
    LedSource,
    Photodetector,
    channel_matrix,
    los_gain,
    read_channel_csv,
    received_power,
    write_channel_csv,
)
from vlcsim.errors import DegenerateGeometryError, InvalidArgumentError
from vlcsim.geometry import DOWN, UP, Pose, Vec3
from vlcsim.lambertian import LambertianPattern

# 2 * 1e-4 / (2 pi 2.25^2), 20 digits from mpmath
AXIAL_GAIN = 6.2876026900501861044e-6


def led_at(x, y, z, deg=60.0, normal=DOWN, power=1.0):
    return LedSource(Pose(Vec3(x, y, z), normal), LambertianPattern.from_degrees(deg), power)


def pd_at(x, y, z, normal=UP, area=1e-4, fov_deg=90.0):
    return Photodetector(Pose(Vec3(x, y, z), normal), area, math.radians(fov_deg))


def tilted(deg_from_vertical, up=True):
    t = math.radians(deg_from_vertical)
    return Vec3(math.sin(t), 0.0, math.cos(t) if up else -math.cos(t))


def test_axial_link():
    h = los_gain(led_at(2, 2, 3.0), pd_at(2, 2, 0.75))
    assert h == pytest.approx(AXIAL_GAIN, rel=1e-9)


def test_fov_cutoff_example():
    # detector tilted so the LED arrives at 70 degrees incidence
    rx = pd_at(0, 0, 0, normal=tilted(70), fov_deg=60)
    assert los_gain(led_at(0, 0, 1, normal=DOWN), rx) == 0.0
    wide = pd_at(0, 0, 0, normal=tilted(70), fov_deg=90)
    assert los_gain(led_at(0, 0, 1, normal=DOWN), wide) > 0.0


def test_detector_in_emitter_plane():
    assert los_gain(led_at(0, 0, 1), pd_at(1, 0, 1, normal=Vec3(-1, 0, 0))) == 0.0


def test_coincident_raises():
    with pytest.raises(DegenerateGeometryError):
        los_gain(led_at(1, 1, 1), pd_at(1, 1, 1))


def test_invalid_parameters():
    with pytest.raises(InvalidArgumentError):
        pd_at(0, 0, 0, area=0.0)
    with pytest.raises(InvalidArgumentError):
        pd_at(0, 0, 0, fov_deg=91)
    with pytest.raises(InvalidArgumentError):
        led_at(0, 0, 0, power=0.0)


@pytest.mark.parametrize("d", [1.0, 2.25, 4.0])
def test_inverse_square(d):
    base = los_gain(led_at(0, 0, 1.0, deg=8), pd_at(0, 0, 0.0)) * 1.0
    h = los_gain(led_at(0, 0, d, deg=8), pd_at(0, 0, 0.0))
    assert h * d * d == pytest.approx(base, rel=1e-12)


def test_linear_in_area():
    tx = led_at(0.3, -0.2, 2.0, deg=20)
    h1 = los_gain(tx, pd_at(0, 0, 0, area=1e-4))
    h2 = los_gain(tx, pd_at(0, 0, 0, area=3.7e-4))
    assert h2 / h1 == pytest.approx(3.7, rel=1e-12)


def test_fov_boundary_closed():
    # LED 1 m up and 1 m across: incidence exactly 45 degrees
    tx = led_at(0, 0, 1)
    at_edge = pd_at(1, 0, 0, fov_deg=45)
    open_gain = los_gain(tx, pd_at(1, 0, 0, fov_deg=90))
    phi = math.acos(1 / math.sqrt(2))
    eps = 1e-9
    assert los_gain(tx, Photodetector(at_edge.pose, 1e-4, phi)) == open_gain
    assert los_gain(tx, Photodetector(at_edge.pose, 1e-4, phi - eps)) == 0.0
    # approaching the edge from inside the cone the gain is continuous
    tilt = np.linspace(-1e-6, 0, 5)
    vals = []
    for t in tilt:
        n = Vec3(math.sin(t), 0, math.cos(t))
        vals.append(los_gain(tx, Photodetector(Pose(Vec3(1, 0, 0), n), 1e-4, phi)))
    assert all(v > 0 for v in vals)
    assert vals[-1] == pytest.approx(open_gain, rel=1e-12)


def test_nonnegative_everywhere():
    rng = np.random.default_rng(3)
    for _ in range(300):
        n1, n2 = rng.normal(size=(2, 3))
        tx = LedSource(Pose(Vec3.of(rng.uniform(0, 4, 3)), Vec3.of(n1 / np.linalg.norm(n1))),
                       LambertianPattern(rng.uniform(0.02, 1.5)))
        rx = Photodetector(Pose(Vec3.of(rng.uniform(0, 4, 3)), Vec3.of(n2 / np.linalg.norm(n2))),
                           1e-4, rng.uniform(0.01, math.pi / 2))
        assert los_gain(tx, rx) >= 0.0


def random_link_set(rng, n_tx, n_rx):
    leds, pds = [], []
    for _ in range(n_tx):
        n = rng.normal([0, 0, -1], 0.4)
        leds.append(LedSource(
            Pose(Vec3.of(rng.uniform([0, 0, 2.0], [4, 4, 3.0])), Vec3.of(n / np.linalg.norm(n))),
            LambertianPattern.from_degrees(rng.uniform(3, 80)), rng.uniform(0.1, 5)))
    for _ in range(n_rx):
        n = rng.normal([0, 0, 1], 0.4)
        pds.append(Photodetector(
            Pose(Vec3.of(rng.uniform([0, 0, 0], [4, 4, 1.5])), Vec3.of(n / np.linalg.norm(n))),
            rng.uniform(1e-5, 1e-3), math.radians(rng.uniform(10, 90))))
    return leds, pds


def brute_force_matrix(leds, pds):
    return np.array([[
        oracles.los_gain(tuple(l.pose.position), tuple(l.pose.normal), l.pattern.semi_angle,
                         tuple(p.pose.position), tuple(p.pose.normal), p.area, p.fov)
        for l in leds] for p in pds])


def test_channel_matrix_matches_brute_force():
    rng = np.random.default_rng(2024)
    nonzero = 0
    for _ in range(100):
        leds, pds = random_link_set(rng, rng.integers(1, 6), rng.integers(1, 6))
        H = channel_matrix(leds, pds)
        ref = brute_force_matrix(leds, pds)
        assert H.gains.shape == (len(pds), len(leds))
        np.testing.assert_allclose(H.gains, ref, rtol=1e-12, atol=0)
        nonzero += np.count_nonzero(ref)
    assert nonzero > 300  # the comparison is not vacuous


def test_channel_matrix_singleton():
    tx, rx = led_at(1, 1, 3), pd_at(1.5, 1, 0.75)
    H = channel_matrix([tx], [rx])
    assert H.gains.shape == (1, 1) and H.gains[0, 0] == los_gain(tx, rx)


def test_channel_matrix_empty():
    with pytest.raises(InvalidArgumentError):
        channel_matrix([], [pd_at(0, 0, 0)])
    with pytest.raises(InvalidArgumentError):
        channel_matrix([led_at(0, 0, 1)], [])


def test_preset_matrix_shape(preset_scenarios):
    s = preset_scenarios["table1:4deg"]
    H = channel_matrix(s.leds, s.pds)
    assert H.gains.shape == (4, 4)
    assert np.all(H.gains >= 0)
    np.testing.assert_array_equal(H.gains, H.gains.T)  # symmetric layout


def test_tiny_fov_gives_zero_matrix():
    leds = [led_at(1, 1, 3), led_at(3, 3, 3)]
    pds = [pd_at(1.2, 1.3, 0.75, fov_deg=1e-6), pd_at(2.5, 2.0, 0.75, fov_deg=1e-6)]
    assert not channel_matrix(leds, pds).gains.any()


def test_received_power():
    tx, rx = led_at(2, 2, 3.0), pd_at(2, 2, 0.75)
    H = channel_matrix([tx], [rx])
    assert received_power([tx], H)[0] == pytest.approx(AXIAL_GAIN, rel=1e-9)
    zero = ChannelMatrix(np.zeros((2, 1)))
    assert list(received_power([tx], zero)) == [0.0, 0.0]
    with pytest.raises(InvalidArgumentError):
        received_power([tx, tx], H)


def test_received_power_linear_and_superposes():
    rng = np.random.default_rng(11)
    leds, pds = random_link_set(rng, 6, 4)
    p_all = received_power(leds, channel_matrix(leds, pds))
    p1 = received_power(leds[:2], channel_matrix(leds[:2], pds))
    p2 = received_power(leds[2:], channel_matrix(leds[2:], pds))
    np.testing.assert_allclose(p_all, p1 + p2, rtol=1e-12)
    doubled = [LedSource(l.pose, l.pattern, 2 * l.tx_power) for l in leds]
    np.testing.assert_allclose(received_power(doubled, channel_matrix(doubled, pds)), 2 * p_all, rtol=1e-15)


def test_matrix_rejects_negative():
    with pytest.raises(InvalidArgumentError):
        ChannelMatrix(np.array([[-1.0]]))


def test_channel_csv(preset_scenarios):
    s = preset_scenarios["table1:8deg"]
    H = channel_matrix(s.leds, s.pds)
    buf = io.StringIO()
    write_channel_csv(H, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "rx_index,tx_0,tx_1,tx_2,tx_3"
    assert lines[1].split(",")[1] == f"{H.gains[0, 0]:.8e}"
    back = read_channel_csv(io.StringIO(buf.getvalue()))
    np.testing.assert_allclose(back.gains, H.gains, rtol=5e-9)


def test_unresolvable_separation_raises():
    with pytest.raises(DegenerateGeometryError, match="too close"):
        los_gain(led_at(1, 1, 1e-200), pd_at(1, 1, 0))
