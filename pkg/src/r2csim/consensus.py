"""Consensus round machinery: roles, messages, validation and ledger ordering.

The RC protocol makes every non-proposer a validator; the R2C samples a
uniform random subset of representatives. Message integrity tags are a
non-cryptographic checksum stub.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field
from typing import Iterable, Literal, Optional, Sequence

import numpy as np

from .grid import GridNetwork, InvalidParameterError

Mode = Literal["RC", "R2C"]
FaultyPolicy = Literal["vote-invert", "vote-random", "timestamp-perturb"]


def stub_tag(*parts) -> int:
    """Placeholder for a signature/MAC: a CRC32 over the message fields."""
    return zlib.crc32(repr(parts).encode())


@dataclass(frozen=True)
class Action:
    id: str
    payload: bytes
    proposer: int


@dataclass(frozen=True)
class ProposalMessage:
    action: Action
    proposed_at: float                 # slots since epoch
    commit_order: tuple[int, ...]      # validator ids, commit sequence
    integrity_tag: int = 0

    @classmethod
    def build(cls, action: Action, proposed_at: float, commit_order: Sequence[int]):
        order = tuple(commit_order)
        return cls(action, proposed_at, order, stub_tag(action.id, proposed_at, order))


@dataclass(frozen=True)
class CommitMessage:
    validator: int
    validity: bool
    timestamp: float                   # slots
    integrity_tag: int = 0

    @classmethod
    def build(cls, validator: int, validity: bool, timestamp: float):
        return cls(validator, validity, timestamp, stub_tag(validator, validity, timestamp))


@dataclass(frozen=True)
class RoundOutcome:
    globally_valid: bool
    consensual_timestamp: float
    votes_received: int
    quorum_met: bool
    distortion_vs_full: Optional[float] = None  # R2C only, slots


@dataclass(frozen=True)
class NodeBehavior:
    kind: Literal["honest", "faulty"] = "honest"
    faulty_policy: FaultyPolicy = "vote-invert"
    perturb_max_slots: int = 5


class Ledger:
    """Timestamp-ordered chain of globally valid actions."""

    def __init__(self):
        self.entries: list[tuple[Action, float]] = []
        self._by_id: dict[str, Action] = {}

    def conflicts(self, action: Action) -> bool:
        """Same action id finalized with a different payload."""
        prior = self._by_id.get(action.id)
        return prior is not None and prior.payload != action.payload

    def append(self, action: Action, timestamp: float) -> None:
        self.entries.append((action, timestamp))
        self._by_id[action.id] = action


def assign_roles(
    net: GridNetwork,
    proposer: int,
    mode: Mode,
    n_tilde: int,
    rng: np.random.Generator,
) -> tuple[int, ...]:
    """Return the validator set for a round, sorted by node id.

    RC: all non-proposers. R2C: uniform random n_tilde-subset of them.
    """
    others = np.array([i for i in range(net.node_count) if i != proposer])
    if mode == "RC":
        return tuple(others.tolist())
    if mode == "R2C":
        if not (1 <= n_tilde <= others.size):
            raise InvalidParameterError(
                f"n_tilde must be in [1, {others.size}], got {n_tilde}"
            )
        chosen = rng.choice(others, size=n_tilde, replace=False)
        return tuple(sorted(chosen.tolist()))
    raise InvalidParameterError(f"unknown mode {mode!r}")


def local_validate(
    ledger: Ledger,
    action: Action,
    behavior: NodeBehavior,
    delivery_slot: float,
    rng: Optional[np.random.Generator] = None,
) -> tuple[bool, float]:
    """(validity vote, timestamp) of one validator.

    Honest: valid iff the action does not conflict with the ledger; timestamp
    is the delivery slot (local compute time is taken as zero). Faulty nodes
    act per their policy.
    """
    honest_vote = not ledger.conflicts(action)
    if behavior.kind == "honest":
        return honest_vote, delivery_slot
    if behavior.faulty_policy == "vote-invert":
        return not honest_vote, delivery_slot
    if behavior.faulty_policy == "vote-random":
        if rng is None:
            raise InvalidParameterError("vote-random behavior needs an rng")
        return bool(rng.integers(0, 2)), delivery_slot
    if behavior.faulty_policy == "timestamp-perturb":
        if rng is None:
            raise InvalidParameterError("timestamp-perturb behavior needs an rng")
        return honest_vote, delivery_slot + float(
            rng.integers(0, behavior.perturb_max_slots + 1)
        )
    raise InvalidParameterError(f"unknown faulty policy {behavior.faulty_policy!r}")


def global_validate(commits: Iterable[CommitMessage], quorum: int) -> RoundOutcome:
    """Majority rule over the received commits.

    Fewer than `quorum` commits yields a failed (not exceptional) outcome.
    The consensual timestamp is the mean over all received commit timestamps.
    """
    commits = list(commits)
    if not commits:
        return RoundOutcome(False, float("nan"), 0, quorum_met=False)
    valid_votes = sum(1 for c in commits if c.validity)
    timestamp = sum(c.timestamp for c in commits) / len(commits)
    if len(commits) < quorum:
        return RoundOutcome(False, timestamp, len(commits), quorum_met=False)
    majority_valid = valid_votes > len(commits) - valid_votes
    return RoundOutcome(majority_valid, timestamp, len(commits), quorum_met=True)


def order_actions(
    ledger: Ledger, outcomes: Sequence[tuple[Action, RoundOutcome]]
) -> list[Action]:
    """Append globally valid actions in consensual-timestamp order.

    Ties break on action id. Actions conflicting with an already-ordered
    action are returned as rejected-for-retry instead of being appended.
    """
    accepted = [
        (a, o) for a, o in outcomes if o.globally_valid and o.quorum_met
    ]
    accepted.sort(key=lambda pair: (pair[1].consensual_timestamp, pair[0].id))
    rejected = []
    for action, outcome in accepted:
        if ledger.conflicts(action):
            rejected.append(action)
        else:
            ledger.append(action, outcome.consensual_timestamp)
    return rejected
