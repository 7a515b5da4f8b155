"""Leader querying the divers of its roster in turn."""

from typing import Dict, Iterable, List, Sequence
import logging
from aquarange.audioclock import schedule_reply
from aquarange.exceptions import MissedReplySlotError
from aquarange.ranging import (
    ExchangeCompleted,
    PreambleDetected,
    ProtocolConfig,
    RoundCompleted,
    SenderState,
    Tick,
)
from aquarange.ranging.events import Action, Event

logger = logging.getLogger(__name__)


class LeaderState(SenderState):
    """Sender cycling over a roster of divers.

    After each reply the next query is written so that it reaches the
    leader's own microphone `t_reply0` after the reply did. A diver that
    does not answer in time is skipped and reported unreachable for the round.
    """

    role = "leader"

    def __init__(self, config: ProtocolConfig, roster: Sequence[int]):
        super().__init__(config)
        self.roster = tuple(int(node_id) for node_id in roster)
        self.position = 0
        self.round_index = 0
        self.distances: Dict[int, float] = {}
        self.unreachable: List[int] = []
        self.target = self.roster[0] if self.roster else -1

    def step(self, event: Event) -> List[Action]:
        if not self.roster:
            return []
        return super().step(event)

    def _query_node_id(self) -> int:
        self.target = self.roster[self.position]
        return self.target

    def _advance(self, actions: List[Action]) -> List[Action]:
        completed = [action for action in actions if isinstance(action, ExchangeCompleted)]
        if completed:
            self.distances[self.target] = completed[0].result.distance_m
        else:
            self.unreachable.append(self.target)
        self.position += 1
        if self.position == len(self.roster):
            actions.append(
                RoundCompleted(
                    round_index=self.round_index,
                    distances=dict(self.distances),
                    unreachable=tuple(self.unreachable),
                )
            )
            logger.info(
                "Round %d completed, unreachable divers: %s.",
                self.round_index,
                self.unreachable or "none",
            )
            self.round_index += 1
            self.position = 0
            self.distances = {}
            self.unreachable = []
        return actions

    def _after_exchange(self, actions: List[Action], event: Event) -> List[Action]:
        actions = self._advance(list(actions))
        config = self.config
        self.phase = "idle"
        if isinstance(event, Tick):
            self.next_query = event.mic_index
            actions.append(
                self._query(event.speaker_index + config.latency_samples, event.mic_index)
            )
            return actions
        self.next_query = event.coarse_index
        if isinstance(event, PreambleDetected) and event.fine_index is not None:
            try:
                n = schedule_reply(
                    float(event.fine_index),
                    self.calibrator.state,
                    config.t_reply0,
                    config.sample_rate_hz,
                    write_head=int(event.speaker_index + config.latency_samples),
                )
            except MissedReplySlotError as error:
                logger.warning("%s", error)
            else:
                actions.append(self._query(n, event.coarse_index))
        return actions


def leader_step(event: Event, state: LeaderState) -> List[Action]:
    """Advances the leader state machine by one event."""
    return state.step(event)


def leader_round(state: LeaderState, events: Iterable[Event]) -> List[Action]:
    """Feeds a sequence of events to the leader and collects every action."""
    actions: List[Action] = []
    for event in events:
        actions.extend(state.step(event))
    return actions
