"""Roles of the devices taking part in a round-robin group."""

from dataclasses import dataclass, asdict
from typing import Any, Dict, Iterable, List
from aquarange.constants import NUMBER_OF_IDS, REPLY_INTERVAL_S
from aquarange.exceptions import ParameterError

ROLES = ("leader", "diver")


@dataclass(frozen=True)
class NodeRole:
    """Role, tone ID and shared reply time of one device."""

    role: str
    node_id: int
    tau0: float = REPLY_INTERVAL_S

    def __post_init__(self):
        if self.role not in ROLES:
            raise ParameterError(f"role must be one of {ROLES}, got '{self.role}'.")
        if not 0 <= self.node_id < NUMBER_OF_IDS:
            raise ParameterError(
                f"node_id must lie in [0, {NUMBER_OF_IDS - 1}], got {self.node_id}."
            )
        if self.tau0 <= 0:
            raise ParameterError(f"tau0 must be positive, got {self.tau0}.")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def validate_roster(roles: Iterable[NodeRole]) -> List[int]:
    """Checks for exactly one leader and unique IDs, returning the diver IDs."""
    roles = list(roles)
    leaders = [role for role in roles if role.role == "leader"]
    if len(leaders) != 1:
        raise ParameterError(f"Exactly one leader is required, got {len(leaders)}.")
    identifiers = [role.node_id for role in roles]
    if len(set(identifiers)) != len(identifiers):
        raise ParameterError(f"Node IDs must be unique, got {identifiers}.")
    if len({role.tau0 for role in roles}) != 1:
        raise ParameterError("All devices of a group must share the same tau0.")
    return [role.node_id for role in roles if role.role == "diver"]
