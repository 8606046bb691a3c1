import pytest

import qsgame

FIG1_PHI = "AS F {s3} | (NZ F {s2} & NZ F {s4})"
XNOR = "forall x1; exists y1 deps {x1}; matrix (x1 & y1) | (!x1 & !y1)"


@pytest.fixture
def fig1():
    return qsgame.fixture("fig1")


def test_fixtures_listed():
    assert qsgame.fixture_names() == ["fig1", "fig2", "fig3", "stay"]


def test_game_accessors(fig1):
    assert len(fig1) == 5
    assert fig1.states == ["s0", "s1", "s2", "s3", "s4"]
    assert fig1.initial == "s0"
    assert fig1.owner("s0") == "p1"
    assert fig1.successors("s0") == ["s1", "s2"]
    assert fig1.with_initial("s1").initial == "s1"


def test_game_round_trip():
    g = qsgame.fixture("stay")
    assert qsgame.parse_game(g.format()).format() == g.format()


def test_parse_error_is_value_error():
    with pytest.raises(qsgame.ParseError):
        qsgame.parse_game("garbage")
    with pytest.raises(ValueError):
        qsgame.parse_game("garbage")


def test_classify_and_solve(fig1):
    assert qsgame.classify(fig1, FIG1_PHI) == "GeneralNoNZSafe"
    assert qsgame.solve(fig1, FIG1_PHI)["winner"] == "Unknown"
    assert qsgame.solve(fig1, "NZ F {s2} & NZ F {s4}")["winner"] == "Player2"
    r = qsgame.solve(fig1, "NZ F {s2} | NZ F {s4}", cross_check=True)
    assert r["winner"] == "Player1"
    assert r["fragment"] == "DisjunctionASNZ"


def test_negate(fig1):
    assert qsgame.negate(fig1, "AS F {s3}") == "NZ G ~{s3}"


def test_regions(fig1):
    assert qsgame.region(fig1, "AS F {s3}") == ["s3"]
    assert qsgame.region(fig1, "AS F {s3}", player=2) == ["s1", "s3"]
    with pytest.raises(ValueError):
        qsgame.region(fig1, "AS F {s3} & AS F {s4}")


def test_oracle(fig1):
    assert qsgame.oracle(fig1, FIG1_PHI, "memoryless", "memoryless")["outcome"] == "NoWinnerInClass"
    v = qsgame.oracle(fig1, "NZ F {s2} & NZ F {s4}")
    assert v["outcome"] == "Player2WinsInClass"
    assert v["witness"].startswith("strategy p2")


def test_oracle_fig2_needs_visited_memory():
    g = qsgame.fixture("fig2")
    phi = dict(qsgame.fixture_queries("fig2"))["phi"]
    assert qsgame.oracle(g, phi, "memoryless", max_states=8)["outcome"] == "NoWinnerInClass"
    v = qsgame.oracle(g, phi, max_states=8)
    assert v["outcome"] == "Player1WinsInClass"
    check = qsgame.verify(g, v["witness"], phi, max_states=8)
    assert check["holds"]
    assert check["counterexample"] is None


def test_resource_cap():
    with pytest.raises(qsgame.ResourceError):
        qsgame.oracle(qsgame.fixture("fig2"), "AS F {A}")


def test_dqbf():
    assert qsgame.dqbf_sat(XNOR)
    assert not qsgame.dqbf_sat(XNOR.replace("deps {x1}", "deps {}"))
    game, psi = qsgame.dqbf_reduce(XNOR)
    assert len(game) == 8
    assert qsgame.classify(game, psi) == "GeneralNoNZSafe"


def test_run_cli():
    code, out, err = qsgame.run_cli(["classify", "--game", "builtin:fig1", "--query", "AS F {s3}"])
    assert code == 0, err
    assert "SingleObjective" in out
    code, _, _ = qsgame.run_cli(["no-such-command"])
    assert code == 1
