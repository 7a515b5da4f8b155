"""Submodule running round-robin ranging between a leader and its divers."""

from aquarange.multinode.id_codec import decode_id, tone_snrs_db
from aquarange.multinode.roles import NodeRole, validate_roster
from aquarange.multinode.leader import LeaderState, leader_step, leader_round
from aquarange.multinode.diver import DiverState, diver_step, diver_overhear_distance
from aquarange.multinode.round_log import append_round_csv

__all__ = [
    "decode_id",
    "tone_snrs_db",
    "NodeRole",
    "validate_roster",
    "LeaderState",
    "leader_step",
    "leader_round",
    "DiverState",
    "diver_step",
    "diver_overhear_distance",
    "append_round_csv",
]
