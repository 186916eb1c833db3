"""Random and fixture instances plus file round-trip.

Families: "er" (uniform random), "waxman" (geometric random with the
classic exponential edge probability), "complete", and "fixture" for the
two hand-built witness graphs. Weight models: "w1" (all 1), "euc"
(Euclidean distance between placed points), "wn" (uniform integers in
1..n). Generation is deterministic per seed; disconnected samples are
retried on derived sub-seeds and the retry count is recorded.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .graph import GraphError, WeightedGraph, build_graph, is_connected

FAMILIES = ("er", "waxman", "complete", "fixture")
WEIGHT_MODELS = ("w1", "euc", "wn")
DENSITY_MODES = ("rel", "deg", "complete")

DEFAULT_WAXMAN_BETA = 0.14
MAX_RESAMPLES = 200


class GenerationError(ValueError):
    """Instance generation could not produce a valid graph."""


@dataclass(frozen=True)
class InstanceSpec:
    family: str
    n: int = 0
    density_mode: str = "deg"       # "rel": edge prob, "deg": average degree
    density_value: float = 0.0
    weight_model: str = "w1"
    seed: int = 0
    waxman_beta: float = DEFAULT_WAXMAN_BETA
    fixture_name: str | None = None

    def label(self) -> str:
        if self.family == "fixture":
            return f"fixture:{self.fixture_name}"
        dens = "cmp" if self.density_mode == "complete" else f"{self.density_mode}{self.density_value:g}"
        return f"{self.family}-n{self.n}-{dens}-{self.weight_model}-s{self.seed}"


@dataclass
class Instance:
    graph: WeightedGraph
    spec: InstanceSpec | None = None
    coords: np.ndarray | None = None
    provenance: dict = field(default_factory=dict)

    @property
    def name(self) -> str:
        if self.spec is not None:
            return self.spec.label()
        return self.provenance.get("name", "instance")


def _pair_index(n: int) -> tuple[np.ndarray, np.ndarray]:
    iu = np.triu_indices(n, k=1)
    return iu[0], iu[1]


def _target_edge_count(spec: InstanceSpec) -> float:
    npairs = spec.n * (spec.n - 1) / 2
    if spec.density_mode == "rel":
        return spec.density_value * npairs
    if spec.density_mode == "deg":
        return spec.density_value * spec.n / 2
    return npairs


def _sample_edges(spec: InstanceSpec, rng: np.random.Generator, coords: np.ndarray | None):
    """One sampling attempt; returns (pairs (u,v) array, gamma or None, clamped)."""
    n = spec.n
    us, vs = _pair_index(n)
    if spec.family == "complete" or spec.density_mode == "complete":
        return np.stack([us, vs], axis=1), None, False
    if spec.family == "er":
        if spec.density_mode == "rel":
            p = spec.density_value
        else:
            p = spec.density_value / (n - 1)
        if not (0 < p <= 1):
            raise GenerationError(f"edge probability {p} out of (0,1] for {spec.label()}")
        mask = rng.random(len(us)) < p
        return np.stack([us[mask], vs[mask]], axis=1), None, False
    if spec.family == "waxman":
        assert coords is not None
        d = np.hypot(coords[us, 0] - coords[vs, 0], coords[us, 1] - coords[vs, 1])
        scale = d.max()
        if scale <= 0:
            raise GenerationError("degenerate point placement")
        base = np.exp(-d / (spec.waxman_beta * scale))
        target = _target_edge_count(spec)
        gamma = target / base.sum()
        clamped = gamma > 1.0
        gamma = min(gamma, 1.0)
        if gamma <= 0:
            raise GenerationError(f"cannot calibrate waxman density for {spec.label()}")
        mask = rng.random(len(us)) < gamma * base
        return np.stack([us[mask], vs[mask]], axis=1), float(gamma), clamped
    raise GenerationError(f"unknown family {spec.family!r}")


def generate(spec: InstanceSpec) -> Instance:
    """Build a connected instance from a spec, deterministically per seed."""
    if spec.family == "fixture":
        inst = make_fixture(spec.fixture_name or "")
        inst.spec = spec
        return inst
    if spec.family not in FAMILIES:
        raise GenerationError(f"unknown family {spec.family!r}")
    if spec.weight_model not in WEIGHT_MODELS:
        raise GenerationError(f"unknown weight model {spec.weight_model!r}")
    if spec.n < 2:
        raise GenerationError(f"need at least 2 nodes, got {spec.n}")

    needs_coords = spec.family == "waxman" or spec.weight_model == "euc"
    for attempt in range(MAX_RESAMPLES):
        rng = np.random.default_rng([spec.seed, attempt])
        coords = rng.random((spec.n, 2)) if needs_coords else None
        pairs, gamma, clamped = _sample_edges(spec, rng, coords)
        m = len(pairs)
        if m < spec.n - 1:
            continue
        if spec.weight_model == "w1":
            weights = [1] * m
        elif spec.weight_model == "wn":
            weights = [int(w) for w in rng.integers(1, spec.n + 1, size=m)]
        else:
            weights = [
                float(math.hypot(coords[u, 0] - coords[v, 0], coords[u, 1] - coords[v, 1]))
                for u, v in pairs
            ]
        g = build_graph(spec.n, [(int(u), int(v), w) for (u, v), w in zip(pairs, weights)])
        if is_connected(g):
            prov = {"resamples": attempt}
            if gamma is not None:
                prov["waxman_gamma"] = gamma
                prov["waxman_gamma_clamped"] = clamped
            return Instance(g, spec, coords, prov)
    raise GenerationError(
        f"no connected sample for {spec.label()} after {MAX_RESAMPLES} attempts; "
        "density is likely too low for this n"
    )


# ---------------------------------------------------------------------------
# fixtures


def make_c4_witness() -> Instance:
    """Unit-weight 4-cycle. At stretch 2 every adjacent pair must keep its
    own edge (the detour has weight 3 > 2), so the whole cycle is optimal."""
    g = build_graph(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)])
    return Instance(g, None, None, {"name": "c4"})


def make_k5_subdivision_witness() -> Instance:
    """K5 with every edge of one Hamilton cycle subdivided once.

    Nodes 0..9: evens are the original K5 nodes (degree 4), odds the
    subdivision nodes (degree 2). The 10-cycle carries the subdivided
    Hamilton edges; the five chords are the remaining K5 edges, joining
    evens at cycle distance 4. All weights 1.
    """
    edges = [(i, (i + 1) % 10, 1) for i in range(10)]
    edges += [(0, 4, 1), (2, 6, 1), (4, 8, 1), (0, 6, 1), (2, 8, 1)]
    g = build_graph(10, edges)
    return Instance(g, None, None, {"name": "k5sub"})


_FIXTURES = {"c4": make_c4_witness, "k5sub": make_k5_subdivision_witness}


def make_fixture(name: str) -> Instance:
    try:
        return _FIXTURES[name]()
    except KeyError:
        raise GenerationError(f"unknown fixture {name!r}; have {sorted(_FIXTURES)}") from None


# ---------------------------------------------------------------------------
# file round trip


def _format_weight(w) -> str:
    return str(int(w)) if float(w).is_integer() else repr(float(w))


def _parse_weight(tok: str):
    w = float(tok)
    return int(w) if w.is_integer() else w


def write_instance(path: str, inst: Instance, fmt: str | None = None) -> None:
    """Write "edge_list" (default) or "stp" format plus a JSON sidecar with
    the generator parameters, coordinates and sampling provenance."""
    g = inst.graph
    if fmt is None:
        fmt = "stp" if path.endswith(".stp") else "edge_list"
    lines: list[str] = []
    if fmt == "edge_list":
        lines.append(f"{g.n} {g.m}")
        for (u, v), w in zip(g.edges, g.weights):
            lines.append(f"{u} {v} {_format_weight(w)}")
    elif fmt == "stp":
        lines.append("33D32945 STP File, STP Format Version 1.0")
        lines.append("SECTION Comment")
        lines.append(f'Name "{inst.name}"')
        lines.append("END")
        lines.append("")
        lines.append("SECTION Graph")
        lines.append(f"Nodes {g.n}")
        lines.append(f"Edges {g.m}")
        for (u, v), w in zip(g.edges, g.weights):
            lines.append(f"E {u + 1} {v + 1} {_format_weight(w)}")
        lines.append("END")
        lines.append("")
        lines.append("EOF")
    else:
        raise ValueError(f"unknown format {fmt!r}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")

    sidecar = {"provenance": inst.provenance}
    if inst.spec is not None:
        sidecar["spec"] = {
            "family": inst.spec.family,
            "n": inst.spec.n,
            "density_mode": inst.spec.density_mode,
            "density_value": inst.spec.density_value,
            "weight_model": inst.spec.weight_model,
            "seed": inst.spec.seed,
            "waxman_beta": inst.spec.waxman_beta,
            "fixture_name": inst.spec.fixture_name,
        }
    if inst.coords is not None:
        sidecar["coords"] = [[float(x), float(y)] for x, y in inst.coords]
    with open(path + ".json", "w") as fh:
        json.dump(sidecar, fh, sort_keys=True, indent=1)
        fh.write("\n")


def read_instance(path: str) -> Instance:
    """Read an instance written by write_instance, or any SteinLib-style
    .stp graph section (terminal sections are ignored)."""
    with open(path) as fh:
        text = fh.read()
    fmt = "stp" if path.endswith(".stp") or text.startswith("33D32945") else "edge_list"
    if fmt == "edge_list":
        g = _read_edge_list(text, path)
    else:
        g = _read_stp(text, path)

    inst = Instance(g, None, None, {"name": os.path.basename(path)})
    if os.path.exists(path + ".json"):
        with open(path + ".json") as fh:
            sidecar = json.load(fh)
        inst.provenance = sidecar.get("provenance", {})
        if "spec" in sidecar:
            inst.spec = InstanceSpec(**sidecar["spec"])
        if "coords" in sidecar:
            inst.coords = np.array(sidecar["coords"], dtype=float)
    return inst


def _read_edge_list(text: str, path: str) -> WeightedGraph:
    lines = [ln for ln in text.splitlines()]
    rows: list[tuple[int, str]] = [
        (i + 1, ln.strip()) for i, ln in enumerate(lines) if ln.strip() and not ln.lstrip().startswith("#")
    ]
    if not rows:
        raise GraphError(f"{path}: empty file")
    lineno, header = rows[0]
    parts = header.split()
    if len(parts) != 2:
        raise GraphError(f"{path}:{lineno}: expected header 'n m', got {header!r}")
    n, m = int(parts[0]), int(parts[1])
    edges = []
    for lineno, ln in rows[1:]:
        parts = ln.split()
        if len(parts) != 3:
            raise GraphError(f"{path}:{lineno}: expected 'u v w', got {ln!r}")
        edges.append((int(parts[0]), int(parts[1]), _parse_weight(parts[2])))
    if len(edges) != m:
        raise GraphError(f"{path}: header promises {m} edges, found {len(edges)}")
    return build_graph(n, edges)


def _read_stp(text: str, path: str) -> WeightedGraph:
    n = None
    edges: list[tuple[int, int, float]] = []
    in_graph = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        ln = raw.strip()
        if not ln:
            continue
        upper = ln.upper()
        if upper.startswith("SECTION"):
            in_graph = upper.split()[-1] == "GRAPH"
            continue
        if upper == "END":
            in_graph = False
            continue
        if not in_graph:
            continue
        parts = ln.split()
        try:
            if upper.startswith("NODES"):
                n = int(parts[1])
            elif upper.startswith("EDGES"):
                pass  # count checked implicitly by build_graph validation
            elif parts[0] in ("E", "A"):
                edges.append((int(parts[1]) - 1, int(parts[2]) - 1, _parse_weight(parts[3])))
        except (IndexError, ValueError) as exc:
            raise GraphError(f"{path}:{lineno}: malformed graph line {ln!r}: {exc}") from None
    if n is None:
        raise GraphError(f"{path}: no graph section found")
    if not edges:
        raise GraphError(f"{path}: graph section has no edges")
    return build_graph(n, edges)
