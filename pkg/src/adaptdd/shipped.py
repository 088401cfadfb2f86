"""Device and noise files bundled with the package, addressable by name."""
from __future__ import annotations

from importlib import resources
from pathlib import Path

from .device import DeviceModel, load_device
from .noise import NoiseModel, load_noise

_ROOT = resources.files("adaptdd") / "data"


def _names(kind: str) -> list[str]:
    return sorted(p.name[:-5] for p in (_ROOT / kind).iterdir() if p.name.endswith(".json"))


def device_names() -> list[str]:
    return _names("devices")


def noise_names() -> list[str]:
    return _names("noise")


def shipped_device(name: str) -> DeviceModel:
    if name not in device_names():
        raise KeyError(f"no shipped device {name!r}; choose from {', '.join(device_names())}")
    return load_device((_ROOT / "devices" / f"{name}.json").read_text(encoding="utf-8"))


def shipped_noise(name: str) -> NoiseModel:
    if name not in noise_names():
        raise KeyError(f"no shipped noise model {name!r}; choose from {', '.join(noise_names())}")
    return load_noise((_ROOT / "noise" / f"{name}.json").read_text(encoding="utf-8"))


def resolve_device(arg: str) -> DeviceModel:
    """A path to a device file, or the name of a shipped one."""
    return load_device(Path(arg)) if Path(arg).exists() else shipped_device(Path(arg).stem)


def resolve_noise(arg: str) -> NoiseModel:
    return load_noise(Path(arg)) if Path(arg).exists() else shipped_noise(Path(arg).stem)
