"""
Catalog of the bundled example networks.

Each entry names a fixture under ``networks/`` together with the verdicts it
is known to produce, so the CLI can run examples by name and the tests can
check every fixture against its expectations.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Union

from .parser import ParsedDocument, load_file

NETWORKS_DIR = Path(__file__).resolve().parent.parent / "networks"


@dataclass
class NetworkEntry:
    """A bundled network and the verdicts it is known to produce"""
    name: str
    filename: str
    description: str
    local_acr: List[str] = field(default_factory=list)
    nondegeneracy: Optional[str] = None
    points_file: Optional[str] = None

    @property
    def path(self) -> Path:
        return NETWORKS_DIR / self.filename

    def load(self) -> ParsedDocument:
        return load_file(self.path)


class NetworkCatalog:
    """Registry of named example networks"""

    def __init__(self):
        self._entries: Dict[str, NetworkEntry] = {}
        self._register_default_networks()

    def register(self, entry: NetworkEntry) -> None:
        self._entries[entry.name] = entry

    def get(self, name: str) -> Optional[NetworkEntry]:
        return self._entries.get(name)

    def list_entries(self) -> List[NetworkEntry]:
        return [self._entries[name] for name in sorted(self._entries)]

    def get_names(self) -> List[str]:
        return sorted(self._entries)

    def _register_default_networks(self):
        self.register(NetworkEntry(
            name="shinar-feinberg",
            filename="shinar-feinberg.crn",
            description="X1 + X2 -> 2 X2, X2 -> X1 with ACR in X1",
            local_acr=["X1"],
            nondegeneracy="CERTIFIED",
            points_file="shinar-feinberg.points",
        ))
        self.register(NetworkEntry(
            name="lacr-power-law",
            filename="lacr-power-law.mat",
            description="N = (1, -2, 1), B = [[3, 2, 1], [1, 1, 1]]; local ACR in X1 only",
            local_acr=["X1"],
            nondegeneracy="FAILS",
        ))
        self.register(NetworkEntry(
            name="idhkp-idh",
            filename="idhkp-idh.crn",
            description="IDHKP-IDH core module, mass-action; local ACR in X4",
            local_acr=["X4"],
            nondegeneracy="CERTIFIED",
        ))
        self.register(NetworkEntry(
            name="idhkp-idh-symbolic",
            filename="idhkp-idh-symbolic.crn",
            description="IDHKP-IDH with symbolic exponents; X4 conditional on b33 = b34, b55 = b56",
            nondegeneracy="CERTIFIED",
        ))
        self.register(NetworkEntry(
            name="convex-rays",
            filename="convex-rays.mat",
            description="non-degeneracy certified on the extreme rays only; local ACR in x2",
            local_acr=["x2"],
            nondegeneracy="CERTIFIED",
        ))
        self.register(NetworkEntry(
            name="divisibility-control",
            filename="divisibility-control.mat",
            description="h1 divides p_v(h) although x1 has no local ACR",
            nondegeneracy="CERTIFIED",
        ))
        self.register(NetworkEntry(
            name="rational-exponents",
            filename="rational-exponents.crn",
            description="rational power-law exponents; polynomializes with m = (3, 3)",
            local_acr=["X1"],
        ))
        self.register(NetworkEntry(
            name="dimerization",
            filename="dimerization.crn",
            description="2 X1 <=> X2, curved conservation fibers",
            nondegeneracy="CERTIFIED",
        ))
        self.register(NetworkEntry(
            name="sum-of-squares",
            filename="sum-of-squares.mat",
            description="with k = 1 every positive zero is degenerate, so the ACR in x3 "
                        "is invisible to the minor criterion",
            points_file="sum-of-squares.points",
        ))


# Global catalog instance
catalog = NetworkCatalog()


def get_network(name: str) -> NetworkEntry:
    """
    Look up a bundled network by name.

    Raises:
        KeyError: If no network has that name
    """
    entry = catalog.get(name)
    if entry is None:
        raise KeyError(f"unknown example '{name}'; available: {', '.join(catalog.get_names())}")
    return entry


def list_networks(include_descriptions: bool = False) -> Union[List[str], Dict[str, str]]:
    if include_descriptions:
        return {entry.name: entry.description for entry in catalog.list_entries()}
    return catalog.get_names()


def resolve(name_or_path: Union[str, Path]) -> Path:
    """A catalog name maps to its bundled file; anything else is a path."""
    entry = catalog.get(str(name_or_path))
    return entry.path if entry is not None else Path(name_or_path)
