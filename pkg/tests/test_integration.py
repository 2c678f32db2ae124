"""Cross-cutting checks: degenerate hosts, determinism, process-level entry
points, and environment configuration."""

import subprocess
import sys

from bdtw.corpus import named_graph
from bdtw.game import GameConfig, solve
from bdtw.graphs import Graph, closure, dumps_graph
from bdtw.monotonize import monotonize_pipeline
from bdtw.pre_tree import dumps_ptd
from bdtw.strategy_tree import dumps_strategy_tree
from bdtw.tree_decomp import dumps_td, td_depth, td_width, validate_td


class TestDegenerateHosts:
    def test_empty_graph_pipeline(self):
        from bdtw.monotonize import check_branching_depth_bound

        r = monotonize_pipeline(Graph(0, []), 1, 1)
        assert r.member
        assert validate_td(r.td).ok
        assert td_depth(r.td) == 0
        # Edgeless host: zero depth against zero branching nodes.
        assert check_branching_depth_bound(r.exact_ptd, r.strategy_tree)

    def test_single_vertex_pipeline(self):
        r = monotonize_pipeline(Graph(1, []), 1, 1, verify=True)
        assert r.member
        assert validate_td(r.td).ok
        assert td_width(r.td) == 0
        assert td_depth(r.td) == 1

    def test_loop_only_graph(self):
        g = Graph(2, [(0, 0)])
        r = monotonize_pipeline(g, 1, 1, verify=True)
        assert r.member
        assert validate_td(r.td).ok
        covered = set()
        for b in r.td.bags:
            covered |= b
        assert covered == {0, 1}

    def test_host_with_own_loops(self):
        g = Graph(3, [(0, 1), (1, 1), (2, 2)])
        r = monotonize_pipeline(g, 2, 2, verify=True)
        assert r.member
        assert validate_td(r.td).ok


class TestDeterminism:
    def test_pipeline_is_reproducible(self):
        outs = []
        for _ in range(2):
            r = monotonize_pipeline(named_graph("C4"), 3, 3, fuzz_slack=2, seed=13)
            outs.append(
                (
                    dumps_strategy_tree(r.strategy_tree),
                    dumps_ptd(r.exact_ptd),
                    dumps_td(r.td),
                )
            )
        assert outs[0] == outs[1]

    def test_solver_strategy_is_reproducible(self):
        gc = closure(named_graph("GRID2x3"))
        a = solve(gc, GameConfig(3, 4)).strategy
        b = solve(gc, GameConfig(3, 4)).strategy
        assert a.moves == b.moves


class TestProcessLevel:
    def test_console_module_entry(self, tmp_path):
        path = tmp_path / "g.gr"
        path.write_text(dumps_graph(named_graph("E1")))
        proc = subprocess.run(
            [sys.executable, "-m", "bdtw.cli", "decide", str(path), "--k", "2", "--q", "2"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0
        assert "IN T^2_2" in proc.stdout

    def test_budget_env_variable(self, tmp_path):
        path = tmp_path / "g.gr"
        path.write_text(dumps_graph(named_graph("K3")))
        proc = subprocess.run(
            [sys.executable, "-m", "bdtw.cli", "decide", str(path), "--k", "3", "--q", "3"],
            capture_output=True, text=True, env={"PATH": "", "BDTW_BUDGET": "3"},
        )
        assert proc.returncode == 2
        assert "budget" in proc.stderr

    def test_equivalence_parallel_jobs(self, capsys):
        from bdtw.cli import main

        rc = main(["equivalence", "--corpus", "all-graphs:3", "--k", "1-2",
                   "--q", "1-3", "--jobs", "2"])
        assert rc == 0
        assert "disagreements: 0" in capsys.readouterr().out
