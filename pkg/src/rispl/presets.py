"""Built-in RIS and antenna parameter sets from the reference measurement setups."""

from __future__ import annotations

from .radiation import AntennaSpec, CosinePattern
from .ris import RisConfig


class PresetError(ValueError):
    pass


# wavelengths are the published rounded values, used verbatim rather than c/f
RIS_PRESETS = {
    "large-ris1": dict(rows=100, cols=102, dx=0.01, dy=0.01, amplitude=0.9,
                       frequency=10.5e9, wavelength=0.0286),
    "large-ris2": dict(rows=50, cols=34, dx=0.01, dy=0.01, amplitude=0.9,
                       frequency=10.5e9, wavelength=0.0286),
    "small-ris": dict(rows=8, cols=32, dx=0.012, dy=0.012, amplitude=0.7,
                      frequency=4.25e9, wavelength=0.07),
}

ANTENNA_PRESETS = {
    "x-band-horn": dict(alpha=62.0, gain=126.0),
    "c-band-horn": dict(alpha=13.0, gain=28.0),
}

# antenna used with each RIS in the reference setups
DEFAULT_ANTENNA = {
    "large-ris1": "x-band-horn",
    "large-ris2": "x-band-horn",
    "small-ris": "c-band-horn",
}


def preset_names() -> list[str]:
    return sorted(RIS_PRESETS) + sorted(ANTENNA_PRESETS)


def ris_preset(name: str) -> RisConfig:
    try:
        params = RIS_PRESETS[name]
    except KeyError:
        raise PresetError(f"unknown RIS preset {name!r}; choose from {sorted(RIS_PRESETS)}") from None
    return RisConfig(cell_pattern=CosinePattern(3.0), **params)


def antenna_preset(name: str) -> AntennaSpec:
    try:
        params = ANTENNA_PRESETS[name]
    except KeyError:
        raise PresetError(f"unknown antenna preset {name!r}; choose from {sorted(ANTENNA_PRESETS)}") from None
    return AntennaSpec(CosinePattern(params["alpha"]), params["gain"])


def default_antenna(ris_name: str) -> AntennaSpec:
    return antenna_preset(DEFAULT_ANTENNA[ris_name])
