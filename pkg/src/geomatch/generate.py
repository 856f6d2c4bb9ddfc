"""Seeded random instances and the instance JSON format."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import GenerationFailed
from .geometry import Box, Disk, density_estimate, depth, from_dict

SHAPES = ("unit-disk", "disk-ratio", "box")
REGIMES = ("uniform", "low-density", "clustered")


@dataclass
class Instance:
    objects: list
    psi: float = 1.0
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.objects)

    def to_dict(self) -> dict:
        return {"psi": self.psi, "objects": [o.to_dict() for o in self.objects]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def instance_from_dict(d: dict) -> Instance:
    psi = float(d.get("psi", 1.0))
    if not psi >= 1.0:
        raise ValueError(f"psi must be at least 1, got {psi}")
    return Instance([from_dict(o) for o in d.get("objects", [])], psi)


def load_instance(path) -> Instance:
    with open(path) as fh:
        return instance_from_dict(json.load(fh))


def save_instance(inst: Instance, path):
    with open(path, "w") as fh:
        fh.write(inst.to_json())


@dataclass(frozen=True)
class GeneratorSpec:
    """shape: unit-disk | disk-ratio | box; regime: uniform | low-density | clustered.

    ``region`` is the side of the square the anchors are drawn from; when
    omitted it is chosen so that the expected degree is about ``avg_degree``.
    ``target`` is the density cap (low-density) or the mean cluster
    population (clustered).
    """

    shape: str = "unit-disk"
    n: int = 100
    psi: float = 1.0
    regime: str = "uniform"
    region: float | None = None
    avg_degree: float = 4.0
    target: float = 8.0
    max_tries: int = 50

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise ValueError(f"unknown shape {self.shape!r}")
        if self.regime not in REGIMES:
            raise ValueError(f"unknown regime {self.regime!r}")
        if self.n < 0 or not self.psi >= 1.0:
            raise ValueError("need n >= 0 and psi >= 1")
        if self.shape == "unit-disk" and self.psi != 1.0:
            raise ValueError("unit disks have psi = 1")


def _mean_size(spec: GeneratorSpec) -> float:
    """Average object 'radius' used to pick the default region."""
    if spec.shape == "unit-disk":
        return 1.0
    if spec.shape == "disk-ratio":
        return (1.0 + spec.psi) / 2.0
    return (1.0 + spec.psi) / 4.0


def region_for(spec: GeneratorSpec) -> float:
    if spec.region is not None:
        return float(spec.region)
    # Two objects of radius r meet when anchors are within 2r: area 4 pi r^2.
    r = _mean_size(spec)
    return math.sqrt(max(spec.n, 1) * 4.0 * math.pi * r * r / max(spec.avg_degree, 1e-9))


def _shapes(spec, rng, anchors):
    out = []
    n = len(anchors)
    if spec.shape == "unit-disk":
        return [Disk(float(x), float(y), 1.0) for x, y in anchors]
    if spec.shape == "disk-ratio":
        radii = rng.uniform(1.0, spec.psi, size=n) if spec.psi > 1 else np.ones(n)
        return [Disk(float(x), float(y), float(r)) for (x, y), r in zip(anchors, radii)]
    wh = rng.uniform(1.0, spec.psi, size=(n, 2)) if spec.psi > 1 else np.ones((n, 2))
    for (x, y), (w, h) in zip(anchors, wh):
        out.append(Box(float(x - w / 2), float(y - h / 2), float(x - w / 2 + w), float(y - h / 2 + h)))
    return out


def _clustered_anchors(spec, rng, side):
    k = max(1, int(round(spec.n / max(spec.target, 1.0))))
    centers = rng.uniform(0.0, side, size=(k, 2))
    which = rng.integers(0, k, size=spec.n)
    return centers[which] + rng.normal(0.0, 0.5, size=(spec.n, 2))


def generate(spec: GeneratorSpec, seed) -> Instance:
    """Deterministic instance for (spec, seed)."""
    rng = np.random.default_rng(seed)
    side = region_for(spec)
    psi = 1.0 if spec.shape == "unit-disk" else float(spec.psi)
    if spec.n == 0:
        return Instance([], psi, {"region": side, "tries": 0})
    tries = spec.max_tries if spec.regime == "low-density" else 1
    for t in range(1, tries + 1):
        if spec.regime == "clustered":
            anchors = _clustered_anchors(spec, rng, side)
        else:
            anchors = rng.uniform(0.0, side, size=(spec.n, 2))
        objs = _shapes(spec, rng, anchors)
        if spec.regime != "low-density" or density_estimate(objs) <= spec.target:
            return Instance(objs, psi, {"region": side, "tries": t})
    raise GenerationFailed(f"no instance with density <= {spec.target} after {tries} tries")


def describe(inst: Instance) -> dict:
    """Size, depth and density figures used in reports."""
    return {"n": len(inst.objects), "depth": depth(inst.objects) if inst.objects else 0,
            "density_est": density_estimate(inst.objects) if inst.objects else 0}
