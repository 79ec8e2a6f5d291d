"""
Device descriptions: coupling map and gate durations.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Tuple

import networkx as nx

from ..exceptions import DeviceModelError
from ..utils.helpers import PathLike, read_json, write_json

BASIS_GATES = ("rz", "sx", "x", "cx")
REQUIRED_DURATIONS = BASIS_GATES + ("measure", "reset")

Edge = Tuple[int, int]


def _edge(a: int, b: int) -> Edge:
    return (min(a, b), max(a, b))


@dataclass
class DeviceModel:
    """
    Coupling graph plus per-gate durations in nanoseconds

    ``durations`` holds one entry per basis gate and for ``measure`` and
    ``reset``. ``cx_edge_durations`` optionally overrides the CX duration on
    individual edges.
    """
    name: str
    n_qubits: int
    edges: List[Edge]
    durations: Dict[str, float]
    cx_edge_durations: Dict[Edge, float] = field(default_factory=dict)

    def __post_init__(self):
        self.edges = sorted({_edge(int(a), int(b)) for a, b in self.edges})
        self.cx_edge_durations = {_edge(*e): float(d) for e, d in self.cx_edge_durations.items()}
        self.durations = {str(k).lower(): float(v) for k, v in self.durations.items()}
        self.graph = nx.Graph()
        self.graph.add_nodes_from(range(self.n_qubits))
        for a, b in self.edges:
            if a == b or not (0 <= a < self.n_qubits and 0 <= b < self.n_qubits):
                raise DeviceModelError(f"Edge {(a, b)} is invalid on a {self.n_qubits}-qubit device {self.name}")
            self.graph.add_edge(a, b)
        if self.n_qubits < 1 or not nx.is_connected(self.graph):
            raise DeviceModelError(f"Coupling graph of {self.name} is not connected")
        for key, value in list(self.durations.items()) + [(str(e), d) for e, d in self.cx_edge_durations.items()]:
            if value < 0:
                raise DeviceModelError(f"Duration {key}={value} of {self.name} is negative")
        for edge in self.cx_edge_durations:
            if edge not in self.graph.edges:
                raise DeviceModelError(f"CX duration given for {edge}, which is not a coupling edge of {self.name}")

    def adjacent(self, a: int, b: int) -> bool:
        return self.graph.has_edge(a, b)

    def shortest_path(self, a: int, b: int) -> List[int]:
        return nx.shortest_path(self.graph, a, b)

    def duration(self, kind: str, qubits: Iterable[int] = ()) -> float:
        """Duration in ns; raises DeviceModelError when the entry is missing"""
        kind = kind.lower()
        if kind == "cx":
            edge = _edge(*qubits)
            if edge in self.cx_edge_durations:
                return self.cx_edge_durations[edge]
        if kind not in self.durations:
            raise DeviceModelError(f"Device {self.name} has no duration for {kind!r}")
        return self.durations[kind]

    def scaled(self, factor: float) -> "DeviceModel":
        """Copy with every duration multiplied by ``factor``"""
        return DeviceModel(
            name=self.name,
            n_qubits=self.n_qubits,
            edges=list(self.edges),
            durations={k: v * factor for k, v in self.durations.items()},
            cx_edge_durations={e: d * factor for e, d in self.cx_edge_durations.items()},
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "n_qubits": self.n_qubits,
            "edges": [list(e) for e in self.edges],
            "durations": dict(self.durations),
            "cx_edge_durations": [[a, b, d] for (a, b), d in sorted(self.cx_edge_durations.items())],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "DeviceModel":
        try:
            return cls(
                name=str(data["name"]),
                n_qubits=int(data["n_qubits"]),
                edges=[tuple(e) for e in data["edges"]],
                durations=dict(data["durations"]),
                cx_edge_durations={(int(a), int(b)): float(d) for a, b, d in data.get("cx_edge_durations", [])},
            )
        except (KeyError, TypeError, ValueError) as e:
            raise DeviceModelError(f"Malformed device description: {e}")

    def save(self, path: PathLike) -> Path:
        return write_json(self.to_dict(), path)


def load_device(path: PathLike) -> DeviceModel:
    """Read a device description JSON file"""
    try:
        data = read_json(path)
    except (OSError, ValueError) as e:
        raise DeviceModelError(f"Cannot read device file {path}: {e}")
    if not isinstance(data, dict):
        raise DeviceModelError(f"Device file {path} must hold a JSON object")
    return DeviceModel.from_dict(data)


def _default_durations(cx_ns: float) -> Dict[str, float]:
    return {"rz": 0.0, "sx": 35.0, "x": 70.0, "cx": cx_ns, "measure": 5000.0, "reset": 1000.0}


def t_shaped_device() -> DeviceModel:
    """Five qubits with edges 0-1, 1-2, 1-3, 3-4"""
    return DeviceModel("t_shaped", 5, [(0, 1), (1, 2), (1, 3), (3, 4)], _default_durations(480.0))


def linear_device() -> DeviceModel:
    """Five qubits in a line 0-1-2-3-4"""
    return DeviceModel("linear", 5, [(0, 1), (1, 2), (2, 3), (3, 4)], _default_durations(330.0))


BUILTIN_DEVICES = {
    "t_shaped": t_shaped_device,
    "linear": linear_device,
}


def resolve_device(name_or_path: str) -> DeviceModel:
    """A built-in device name or the path of a device JSON file"""
    if name_or_path in BUILTIN_DEVICES:
        return BUILTIN_DEVICES[name_or_path]()
    if Path(name_or_path).exists():
        return load_device(name_or_path)
    choices = ", ".join(sorted(BUILTIN_DEVICES))
    raise DeviceModelError(f"Unknown device {name_or_path!r}: not a file and not one of {choices}")
