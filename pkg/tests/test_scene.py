# standard library
from dataclasses import replace
from typing import Any


# dependencies
import numpy as np
from pytest import approx, mark, raises
from ris_secrecy.scene import (
    ChannelSet,
    Scene,
    SystemParams,
    element_gain,
    element_positions,
    generate_channels,
    path_coefficient,
)
from ris_secrecy.utils import GeometryError, ParameterError, ShapeError


# test datasets
params = SystemParams(
    carrier_freq=3.75e9,
    total_power=10 ** (-9 / 10) * 1e-3,
    tx_antenna_gain=10 ** (13 / 10),
    noise_power_bob=1e-12,
    noise_power_eve=1e-12,
)
table_scene = Scene(
    cs_tx_pos=(0.74, 0.31, 0.0),
    an_tx_pos=(0.74, -0.31, 0.0),
    ris_center=(0.0, 0.0, 0.4),
    ris_rows=8,
    ris_cols=8,
    element_spacing_row=0.041,
    element_spacing_col=0.041,
    bob_pos=(1.19, 1.41, 0.0),
    eve_pos=(1.19, -1.41, 0.0),
)
small_scene = Scene(
    cs_tx_pos=(1.0, 0.5, 0.0),
    an_tx_pos=(1.0, -0.5, 0.0),
    ris_center=(0.0, 0.0, 0.0),
    ris_rows=2,
    ris_cols=2,
    element_spacing_row=0.1,
    element_spacing_col=0.2,
    bob_pos=(2.0, 1.0, 0.0),
    eve_pos=(2.0, -1.0, 0.0),
)


# test data
data_scene_invalid: list[tuple[dict[str, Any], type]] = [
    ({"ris_rows": 0}, GeometryError),
    ({"ris_cols": 0}, GeometryError),
    ({"element_spacing_row": 0.0}, GeometryError),
    ({"element_spacing_col": -0.1}, GeometryError),
    ({"ris_normal": (0.0, 0.0, 0.0)}, GeometryError),
    ({"bob_pos": (0.0, -0.1, 0.05)}, GeometryError),
    ({"eve_pos": (0.0, 0.0)}, GeometryError),
]
data_params_invalid: list[tuple[dict[str, Any], type]] = [
    ({"total_power": 0.0}, ParameterError),
    ({"noise_power_bob": -1.0}, ParameterError),
    ({"carrier_freq": float("inf")}, ParameterError),
    ({"cosine_exponent": -1.0}, ParameterError),
]
data_element_gain: list[tuple[Any, float, float]] = [
    ((1.0, 0.0, 0.0), 1.0, 1.0),
    ((0.0, 1.0, 0.0), 1.0, 0.0),
    ((-1.0, 0.0, 0.0), 1.0, 0.0),
    ((0.5, np.sqrt(3) / 2, 0.0), 1.0, 0.25),
    ((0.5, np.sqrt(3) / 2, 0.0), 2.0, 0.0625),
    ((0.5, np.sqrt(3) / 2, 0.0), 0.0, 1.0),
]


# test functions
@mark.parametrize("changes, expected", data_scene_invalid)
def test_scene_invalid(changes: dict[str, Any], expected: type) -> None:
    with raises(expected):
        replace(small_scene, **changes)


@mark.parametrize("changes, expected", data_params_invalid)
def test_params_invalid(changes: dict[str, Any], expected: type) -> None:
    with raises(expected):
        replace(params, **changes)


def test_scene_normalizes_normal() -> None:
    scene = replace(small_scene, ris_normal=(2.0, 0.0, 0.0))
    assert scene.ris_normal == (1.0, 0.0, 0.0)
    assert table_scene.n_elements == 64


def test_params_wavelength() -> None:
    assert params.wavelength == approx(0.07994465547, rel=1e-9)


def test_element_positions() -> None:
    expected = np.array(
        [
            [0.0, -0.1, 0.05],
            [0.0, 0.1, 0.05],
            [0.0, -0.1, -0.05],
            [0.0, 0.1, -0.05],
        ]
    )
    np.testing.assert_allclose(element_positions(small_scene), expected, atol=1e-15)


def test_path_coefficient_fixed_point() -> None:
    d = params.wavelength / (4 * np.pi)
    h = path_coefficient((0.0, 0.0, 0.0), (d, 0.0, 0.0), params)
    assert abs(h) == approx(1.0, rel=1e-12)


def test_path_coefficient_one_meter() -> None:
    h = path_coefficient((0.0, 0.0, 0.0), (0.0, 1.0, 0.0), params)
    assert 10 * np.log10(abs(h) ** 2) == approx(-43.93, abs=0.02)


def test_path_coefficient_phase_periodicity() -> None:
    d = 3 * params.wavelength
    h = path_coefficient((0.0, 0.0, 0.0), (0.0, 0.0, d), params)
    assert abs(np.angle(h)) < 1e-9


def test_path_coefficient_gains() -> None:
    h_unit = path_coefficient((0.0, 0.0, 0.0), (1.0, 0.0, 0.0), params)
    h_gain = path_coefficient((0.0, 0.0, 0.0), (1.0, 0.0, 0.0), params, 4.0, 9.0)
    assert h_gain == approx(6.0 * h_unit, rel=1e-12)


def test_path_coefficient_zero_distance() -> None:
    with raises(GeometryError):
        path_coefficient((1.0, 2.0, 3.0), (1.0, 2.0, 3.0), params)


@mark.parametrize("direction, exponent, expected", data_element_gain)
def test_element_gain(direction: Any, exponent: float, expected: float) -> None:
    assert element_gain(direction, (1.0, 0.0, 0.0), exponent) == approx(expected, abs=1e-12)


def test_channel_set_invalid() -> None:
    with raises(ShapeError):
        ChannelSet([1.0, 2.0], [1.0, 2.0], [1.0, 2.0], [1.0])

    with raises(ShapeError):
        ChannelSet([[1.0]], [[1.0]], [[1.0]], [[1.0]])

    with raises(ParameterError):
        ChannelSet([np.nan], [1.0], [1.0], [1.0])


def test_channel_set_read_only() -> None:
    channels = ChannelSet([1.0], [2.0], [3.0], [4.0])
    assert channels.n_elements == 1

    with raises(ValueError):
        channels.h_s_ris[0] = 0.0


def test_channel_set_permuted() -> None:
    channels = ChannelSet([1, 2, 3], [4, 5, 6], [7, 8, 9], [10, 11, 12])
    permuted = channels.permuted([2, 0, 1])
    np.testing.assert_array_equal(permuted.h_s_ris, [3, 1, 2])
    np.testing.assert_array_equal(permuted.h_ris_eve, [12, 10, 11])

    with raises(ShapeError):
        channels.permuted([0, 0, 1])


def test_channel_set_perturbed() -> None:
    channels = generate_channels(small_scene, params)
    same = channels.perturbed(1, spread=0.0)
    np.testing.assert_allclose(same.h_a_ris, channels.h_a_ris, rtol=1e-15)

    first = channels.perturbed(7)
    second = channels.perturbed(7)
    np.testing.assert_array_equal(first.h_s_ris, second.h_s_ris)
    assert not np.allclose(first.h_s_ris, channels.h_s_ris)


def test_generate_channels() -> None:
    channels = generate_channels(table_scene, params)
    assert channels.n_elements == 64
    assert not np.allclose(channels.h_s_ris, channels.h_a_ris)

    for h in (channels.h_s_ris, channels.h_a_ris, channels.h_ris_bob, channels.h_ris_eve):
        assert np.all(np.abs(h) > 0)


def test_generate_channels_mirror_symmetry() -> None:
    channels = generate_channels(table_scene, params)
    norm_bob = np.linalg.norm(channels.h_ris_bob)
    norm_eve = np.linalg.norm(channels.h_ris_eve)
    assert norm_bob == approx(norm_eve, rel=1e-12)

    # mirroring y -> -y reverses the column order
    cs = np.abs(channels.h_s_ris).reshape(8, 8)
    an = np.abs(channels.h_a_ris).reshape(8, 8)
    np.testing.assert_allclose(cs, an[:, ::-1], rtol=1e-9)


def test_generate_channels_far_field() -> None:
    near = replace(small_scene, bob_pos=(10.0, 0.0, 0.0))
    far = replace(small_scene, bob_pos=(20.0, 0.0, 0.0))
    ratio = np.abs(generate_channels(far, params).h_ris_bob) / np.abs(
        generate_channels(near, params).h_ris_bob
    )
    np.testing.assert_allclose(ratio, 0.5, rtol=0.01)


def test_generate_channels_tx_at_center() -> None:
    scene = replace(small_scene, ris_rows=1, ris_cols=2, cs_tx_pos=(0.0, 0.0, 0.0))

    with raises(GeometryError):
        generate_channels(scene, params)
