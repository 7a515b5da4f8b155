"""Diver replying to its own queries and overhearing the next one."""

from typing import List, Optional
import logging
from typeguard import typechecked
from aquarange.exceptions import ParameterError
from aquarange.ranging import DistanceOverheard, PreambleDetected, ProtocolConfig, ReplierState
from aquarange.ranging.events import Action, Event

logger = logging.getLogger(__name__)

OVERHEAR_REFERENCES = ("own_mic", "emission")


@typechecked
def diver_overhear_distance(
    t_10: float,
    tau0: float,
    c: float,
    delta_leader: float = 0.0,
    delta_diver: float = 0.0,
) -> Optional[float]:
    """Returns c (T_10 - tau0 + delta_leader + delta_diver) / 2, or None if negative.

    Parameters
    ----------
    t_10 : float
        Interval from the diver's reply to the arrival of the leader's next query.
    tau0 : float
        Reply time shared by the group.
    c : float
        Sound speed in m/s.
    delta_leader : float
        Speaker-to-microphone delay of the leader.
    delta_diver : float
        Speaker-to-microphone delay of the diver, when T_10 starts at its own microphone.
    """
    distance = c * (t_10 - tau0 + delta_leader + delta_diver) / 2.0
    if distance < 0.0:
        return None
    return distance


class DiverState(ReplierState):
    """Replier answering only queries carrying its ID.

    Once its own reply has been heard, the next leader query of any ID
    yields the diver's own distance to the leader.
    """

    role = "diver"

    def __init__(
        self, config: ProtocolConfig, node_id: int, overhear_reference: str = "own_mic"
    ):
        if overhear_reference not in OVERHEAR_REFERENCES:
            raise ParameterError(
                f"overhear_reference must be one of {OVERHEAR_REFERENCES}, "
                f"got '{overhear_reference}'."
            )
        super().__init__(config, node_id=node_id)
        self.overhear_reference = overhear_reference
        self.armed = False

    def _on_own_reply(self, event: PreambleDetected) -> List[Action]:
        self.armed = event.fine_index is not None
        return []

    def _on_detection(self, event: PreambleDetected) -> List[Action]:
        actions: List[Action] = []
        config = self.config
        if (
            self.phase == "listening"
            and self.armed
            and event.coarse_index > self.own_reply_arrival + config.preamble_len / 2
        ):
            self.armed = False
            if event.fine_index is not None:
                reference = self.own_reply_arrival
                delta_diver = config.own_delta_s
                if self.overhear_reference == "emission":
                    reference -= config.samples(config.own_delta_s)
                    delta_diver = 0.0
                t_10 = (event.fine_index - reference) / config.sample_rate_hz
                distance = diver_overhear_distance(
                    t_10,
                    config.t_reply0,
                    config.sound_speed,
                    delta_leader=config.peer_delta_s,
                    delta_diver=delta_diver,
                )
                if distance is None:
                    logger.debug("Discarded negative overheard distance.")
                else:
                    actions.append(
                        DistanceOverheard(
                            node_id=self.node_id,
                            distance_m=distance,
                            t_10=t_10,
                            mic_index=event.fine_index,
                        )
                    )
        actions.extend(super()._on_detection(event))
        return actions


def diver_step(event: Event, state: DiverState) -> List[Action]:
    """Advances the diver state machine by one event."""
    return state.step(event)
