import pytest

import justnets

BRANCHING = "a.(b.0 + c.0)"
BRANCHING2 = "a.b.0 + a.c.0"


def test_compile_and_round_trip():
    net = justnets.Net.from_ccsps("TL = tr.tg.(drive > ty.TL);\nTraffic = drive.drive.0;\nTL |[drive]| Traffic\n")
    assert net.num_places == 6
    assert net.num_transitions == 5
    again = justnets.Net.from_pnet(net.to_pnet())
    assert again.to_pnet() == net.to_pnet()
    assert "digraph" in net.to_dot()


def test_parse_error():
    with pytest.raises(ValueError):
        justnets.Net.from_pnet("arc p q\n")


def test_failures_and_leq():
    n = justnets.Net.from_ccsps(BRANCHING)
    n2 = justnets.Net.from_ccsps(BRANCHING2)
    assert ("ε", ["a"]) in justnets.failures(n)
    assert justnets.leq(n, n2, blocked=set())["verdict"] == "holds_within_bounds"
    assert justnets.leq(n, n2)["verdict"] == "fails"


def test_must_testing():
    livelock = justnets.Net.from_ccsps("L = tau.L;\nL\n")
    t = justnets.Net.from_ccsps("tau.w.0")
    assert justnets.test(t, livelock, "must-pr") == "fail"
    assert justnets.test(t, livelock, "must-j") == "pass"
    u = justnets.universal_test(["a", "b"], {"c"})
    assert justnets.test(u, justnets.Net.from_ccsps("a.b.0"), "must-j") == "fail"


def test_timed():
    t = justnets.Net.from_ccsps("a.w.0")
    assert justnets.must_timed(t, justnets.Net.from_ccsps("a.0"), 2)["verdict"] == "pass"
    v = justnets.must_timed(t, justnets.Net.from_ccsps("tau.a.0"), "2")
    assert v["verdict"] == "fail"
    assert v["max_duration"] == "3/1"


def test_sched_and_corpus():
    net = justnets.Net.from_ccsps("a.0 ||| b.0")
    r = justnets.sched(net)
    assert r["kind"] == "finite"
    assert r["just"]
    assert all(passed for _, passed, _ in justnets.check_corpus())
    shared = justnets.Net.from_pnet(
        "net shared\nplace p tokens=2\nplace q\ntrans t0 label=a\narc p t0\narc t0 p\n"
        "trans t1 label=b\narc p t1\narc t1 q\n"
    )
    assert justnets.sched(shared, mode="collective")["just"]
