import numpy as np
import pytest

from r2csim import (
    Action,
    CommitMessage,
    GridNetwork,
    InvalidParameterError,
    Ledger,
    NodeBehavior,
    ProposalMessage,
    assign_roles,
    global_validate,
    local_validate,
    order_actions,
)

NET = GridNetwork(side=3, spacing_m=10.0)


def rng(seed=0):
    return np.random.Generator(np.random.Philox(seed))


def test_assign_roles_rc():
    roles = assign_roles(NET, proposer=4, mode="RC", n_tilde=8, rng=rng())
    assert roles == (0, 1, 2, 3, 5, 6, 7, 8)


def test_assign_roles_r2c():
    roles = assign_roles(NET, proposer=0, mode="R2C", n_tilde=3, rng=rng(1))
    assert len(roles) == 3
    assert len(set(roles)) == 3
    assert 0 not in roles
    assert roles == tuple(sorted(roles))
    # same seed, same subset
    assert roles == assign_roles(NET, proposer=0, mode="R2C", n_tilde=3, rng=rng(1))


def test_assign_roles_errors():
    with pytest.raises(InvalidParameterError):
        assign_roles(NET, 0, "R2C", 0, rng())
    with pytest.raises(InvalidParameterError):
        assign_roles(NET, 0, "R2C", 9, rng())
    with pytest.raises(InvalidParameterError):
        assign_roles(NET, 0, "PBFT", 3, rng())


def test_messages_carry_integrity_tags():
    action = Action(id="a1", payload=b"x", proposer=0)
    prop = ProposalMessage.build(action, 0.0, (1, 2, 3))
    commit = CommitMessage.build(1, True, 4.0)
    assert prop.integrity_tag != 0
    assert commit.integrity_tag != 0


def test_local_validate_honest_and_faulty():
    ledger = Ledger()
    action = Action(id="a1", payload=b"x", proposer=0)
    honest = NodeBehavior()
    assert local_validate(ledger, action, honest, 3.0) == (True, 3.0)

    ledger.append(Action(id="a1", payload=b"other", proposer=0), 1.0)
    assert local_validate(ledger, action, honest, 3.0) == (False, 3.0)

    invert = NodeBehavior(kind="faulty", faulty_policy="vote-invert")
    assert local_validate(Ledger(), action, invert, 3.0) == (False, 3.0)

    perturb = NodeBehavior(kind="faulty", faulty_policy="timestamp-perturb",
                           perturb_max_slots=5)
    vote, ts = local_validate(Ledger(), action, perturb, 3.0, rng=rng(2))
    assert vote is True
    assert 3.0 <= ts <= 8.0

    rand = NodeBehavior(kind="faulty", faulty_policy="vote-random")
    with pytest.raises(InvalidParameterError):
        local_validate(Ledger(), action, rand, 3.0)


def test_global_validate_majority():
    commits = [CommitMessage.build(v, v < 3, float(v)) for v in range(5)]
    outcome = global_validate(commits, quorum=4)
    assert outcome.globally_valid          # 3 valid of 5
    assert outcome.quorum_met
    assert outcome.votes_received == 5
    assert outcome.consensual_timestamp == pytest.approx(2.0)

    tied = [CommitMessage.build(v, v < 2, float(v)) for v in range(4)]
    assert not global_validate(tied, quorum=2).globally_valid  # tie is not majority


def test_global_validate_quorum_and_empty():
    commits = [CommitMessage.build(v, True, 1.0) for v in range(3)]
    outcome = global_validate(commits, quorum=5)
    assert not outcome.quorum_met
    assert not outcome.globally_valid
    assert outcome.votes_received == 3

    empty = global_validate([], quorum=1)
    assert empty.votes_received == 0
    assert not empty.quorum_met


def test_order_actions_sorts_and_rejects_conflicts():
    from r2csim import RoundOutcome

    ledger = Ledger()
    a = Action(id="a", payload=b"1", proposer=0)
    b = Action(id="b", payload=b"2", proposer=1)
    a_conflict = Action(id="a", payload=b"999", proposer=2)
    outcomes = [
        (b, RoundOutcome(True, 5.0, 8, True)),
        (a, RoundOutcome(True, 2.0, 8, True)),
        (a_conflict, RoundOutcome(True, 9.0, 8, True)),
        (Action(id="c", payload=b"3", proposer=0), RoundOutcome(False, 1.0, 8, True)),
    ]
    rejected = order_actions(ledger, outcomes)
    assert [entry[0].id for entry in ledger.entries] == ["a", "b"]
    assert rejected == [a_conflict]


def test_order_actions_tie_breaks_on_id():
    from r2csim import RoundOutcome

    ledger = Ledger()
    z = Action(id="z", payload=b"1", proposer=0)
    a = Action(id="a", payload=b"2", proposer=1)
    order_actions(ledger, [(z, RoundOutcome(True, 1.0, 8, True)),
                           (a, RoundOutcome(True, 1.0, 8, True))])
    assert [entry[0].id for entry in ledger.entries] == ["a", "z"]
