import io

import pytest

from bdtw.cli import main
from bdtw.graphs import dumps_graph
from bdtw.corpus import named_graph


@pytest.fixture
def graph_file(tmp_path):
    def write(name):
        path = tmp_path / f"{name}.gr"
        path.write_text(dumps_graph(named_graph(name)))
        return str(path)

    return write


class TestDecide:
    def test_member_exit_zero(self, graph_file, capsys):
        assert main(["decide", graph_file("E1"), "--k", "2", "--q", "2"]) == 0
        assert "IN T^2_2" in capsys.readouterr().out

    def test_nonmember_exit_one(self, graph_file, capsys):
        assert main(["decide", graph_file("K3"), "--k", "2", "--q", "6"]) == 1
        assert "NOT IN" in capsys.readouterr().out

    def test_parse_error_exit_two(self, tmp_path, capsys):
        bad = tmp_path / "bad.gr"
        bad.write_text("nonsense\n")
        assert main(["decide", str(bad), "--k", "1", "--q", "1"]) == 2

    def test_certificate_revalidates(self, graph_file, tmp_path, capsys):
        cert = str(tmp_path / "out.td")
        g = graph_file("P3")
        assert main(["decide", g, "--k", "2", "--q", "2", "--certificate", cert]) == 0
        assert main(["verify", cert, "--graph", g]) == 0

    def test_via_nonmonotone_certificate(self, graph_file, tmp_path):
        cert = str(tmp_path / "out.td")
        g = graph_file("K3")
        rc = main(["decide", g, "--k", "3", "--q", "3", "--certificate", cert,
                   "--via-nonmonotone", "--verify"])
        assert rc == 0
        assert main(["verify", cert, "--graph", g]) == 0

    def test_ptd_certificate_format(self, graph_file, tmp_path):
        cert = str(tmp_path / "out.ptd")
        g = graph_file("E1")
        assert main(["decide", g, "--k", "2", "--q", "2", "--certificate", cert,
                     "--format", "ptd"]) == 0
        assert main(["verify", cert]) == 0

    def test_empty_graph_member(self, tmp_path):
        path = tmp_path / "empty.gr"
        path.write_text("p tw 0 0\n")
        assert main(["decide", str(path), "--k", "1", "--q", "1"]) == 0


class TestSolve:
    def test_winner_and_dump(self, graph_file, tmp_path, capsys):
        dump = str(tmp_path / "sigma.txt")
        rc = main(["solve", graph_file("K3"), "--k", "3", "--q", "3",
                   "--closure", "--strategy-out", dump])
        assert rc == 0
        out = capsys.readouterr().out
        assert "winner: cop" in out
        text = open(dump).read()
        assert "->" in text and "|" in text

    def test_monotone_flag(self, graph_file, capsys):
        rc = main(["solve", graph_file("K3"), "--k", "2", "--q", "4", "--monotone"])
        assert rc == 0
        assert "winner: robber" in capsys.readouterr().out


class TestMonotonizeCmd:
    def test_round_trip_through_files(self, tmp_path, capsys):
        from bdtw.game import GameConfig, solve
        from bdtw.graphs import closure
        from bdtw.strategy_tree import build, dumps_strategy_tree, fuzz_nonmonotone

        g = closure(named_graph("P3"))
        res = solve(g, GameConfig(2, 2))
        fz = fuzz_nonmonotone(g, res.strategy, GameConfig(2, 2), 1, seed=5)
        st = build(g, fz.strategy, GameConfig(2, fz.placements_bound))
        st_path = tmp_path / "tree.st"
        st_path.write_text(dumps_strategy_tree(st))
        out_path = str(tmp_path / "exact.ptd")
        assert main(["monotonize", str(st_path), "--verify", "-o", out_path]) == 0
        assert main(["verify", out_path]) == 0


class TestVerifyCmd:
    def test_corrupted_td_reports(self, graph_file, tmp_path, capsys):
        cert = tmp_path / "out.td"
        g = graph_file("P3")
        main(["decide", g, "--k", "2", "--q", "2", "--certificate", str(cert)])
        # Drop a vertex from one bag: T1 or T2 must trip.
        lines = cert.read_text().splitlines()
        mangled = []
        for line in lines:
            if line.startswith("b") and line.count(" ") >= 2:
                parts = line.split()
                mangled.append(" ".join(parts[:-1]))
            else:
                mangled.append(line)
        cert.write_text("\n".join(mangled) + "\n")
        rc = main(["verify", str(cert), "--graph", g])
        assert rc == 1

    def test_td_needs_graph(self, graph_file, tmp_path):
        cert = str(tmp_path / "out.td")
        main(["decide", graph_file("P3"), "--k", "2", "--q", "2", "--certificate", cert])
        assert main(["verify", cert]) == 2


class TestEquivalenceCmd:
    def test_small_sweep(self, capsys):
        rc = main(["equivalence", "--corpus", "all-graphs:3", "--k", "1-2", "--q", "1-3"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "disagreements: 0" in out

    def test_named_corpus(self, capsys):
        rc = main(["equivalence", "--corpus", "named:E1,K3", "--k", "2-3", "--q", "1-3"])
        assert rc == 0

    def test_empty_corpus(self, capsys):
        rc = main(["equivalence", "--corpus", "paths:4-3", "--k", "1-2", "--q", "1-2"])
        assert rc == 0
        assert "instances: 0" in capsys.readouterr().out


class TestPlayCmd:
    def test_scripted_capture_as_cop(self, graph_file, tmp_path, monkeypatch, capsys):
        log = str(tmp_path / "session.log")
        monkeypatch.setattr("sys.stdin", io.StringIO("place 0\nplace 1\n"))
        rc = main(["play", graph_file("E1"), "--k", "2", "--q", "2",
                   "--as", "cop", "--closure", "--log", log])
        assert rc == 0
        text = open(log).read()
        assert "captured: cops win" in text
        assert "round 2" in text

    def test_robber_survives_k3_with_two_cops(self, graph_file, monkeypatch, capsys):
        monkeypatch.setattr("sys.stdin", io.StringIO("0\n" * 10))
        rc = main(["play", graph_file("K3"), "--k", "2", "--q", "3",
                   "--as", "robber", "--closure"])
        assert rc == 0
        assert "robber wins" in capsys.readouterr().out

    def test_quit_exits_cleanly(self, graph_file, monkeypatch, capsys):
        monkeypatch.setattr("sys.stdin", io.StringIO("quit\n"))
        rc = main(["play", graph_file("E1"), "--k", "2", "--q", "2",
                   "--as", "cop", "--closure"])
        assert rc == 0
        assert "session ended" in capsys.readouterr().out

    def test_illegal_move_reprompts(self, graph_file, monkeypatch, capsys):
        monkeypatch.setattr("sys.stdin", io.StringIO("place 9\nplace 0\nplace 1\n"))
        rc = main(["play", graph_file("E1"), "--k", "2", "--q", "2",
                   "--as", "cop", "--closure"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "could not parse" in out or "illegal move" in out
        assert "captured" in out
