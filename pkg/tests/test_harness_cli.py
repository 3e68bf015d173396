import csv
import io
import subprocess
import sys
from fractions import Fraction

import pytest

from tadpole_explore.cli import main
from tadpole_explore.graph_core import decompose_tadpole, make_tadpole, serialize_graph
from tadpole_explore.harness import (
    CSV_HEADER,
    ConfigError,
    ExperimentConfig,
    ExperimentIOError,
    WeightDist,
    load_config,
    parse_config,
    random_tadpole,
    rows_to_csv,
    run_experiment,
)


def test_random_tadpole_is_deterministic():
    a = random_tadpole(11, (3, 40), (1, 20), WeightDist(1000, 10))
    b = random_tadpole(11, (3, 40), (1, 20), WeightDist(1000, 10))
    assert a == b


def test_random_tadpoles_are_valid():
    for seed in range(1000):
        d = decompose_tadpole(random_tadpole(seed, (3, 40), (1, 20), WeightDist()))
        assert 3 <= d.i <= 40 and 1 <= d.j <= 20


def test_unit_weight_dist():
    g = random_tadpole(5, (3, 9), (1, 4), WeightDist(1, 1))
    assert {e.weight for e in g.edges()} == {1}


def test_parse_config():
    cfg = parse_config(
        "mode = advice-check  # cycles\nfamily = cycle\nn = 3..16\ntrials = 50\nP = 9\nQ = 2\nseed = 3\n",
        env={},
    )
    assert (cfg.mode, cfg.family, cfg.scheme, cfg.n_range, cfg.trials, cfg.seed) == (
        "advice-check", "cycle", "cycle", (3, 16), 50, 3)
    assert cfg.weights == WeightDist(9, 2)


def test_seed_env_override():
    assert parse_config("mode = fuzz-greedy\nseed = 3\n", env={"SEED": "99"}).seed == 99


@pytest.mark.parametrize(
    "text",
    [
        "trials = 3\n",
        "mode = nope\n",
        "mode = fuzz-greedy\ni = 9..4\n",
        "mode = fuzz-greedy\ntrials = many\n",
        "mode = fuzz-greedy\ncolour = red\n",
        "mode = advice-check\nfamily = cycle\nscheme = tadpole\n",
        "mode = adversary-sweep\nk = 2\n",
    ],
)
def test_bad_configs(text):
    with pytest.raises(ConfigError):
        parse_config(text, env={})


def test_missing_config_names_path(tmp_path):
    with pytest.raises(ExperimentIOError, match="nowhere.cfg"):
        load_config(tmp_path / "nowhere.cfg")


def _csv_rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_fuzz_run_and_determinism(tmp_path):
    cfg = ExperimentConfig(mode="fuzz-greedy", trials=15, i_range=(3, 12), j_range=(1, 6), seed=5,
                           output=tmp_path / "out" / "a.csv")
    rows = run_experiment(cfg)
    assert all(r.passed and r.cost <= 2 * r.opt for r in rows)
    first = cfg.output.read_bytes()
    run_experiment(cfg)
    assert cfg.output.read_bytes() == first
    table = _csv_rows(first.decode())
    assert table[0] == CSV_HEADER
    assert len(table) == len(rows) + 1
    # exact p/q everywhere
    assert Fraction(table[1][6]) == Fraction(table[1][4]) / Fraction(table[1][5])


def test_other_modes():
    rows = run_experiment(ExperimentConfig(mode="oracle-check", trials=10, i_range=(3, 6), j_range=(1, 3)))
    assert all(r.passed for r in rows)
    rows = run_experiment(ExperimentConfig(mode="advice-check", trials=5, family="cycle", n_range=(3, 9)))
    assert all(r.passed and r.ratio == 1 for r in rows)
    rows = run_experiment(ExperimentConfig(mode="advice-check", trials=5, i_range=(3, 6), j_range=(1, 4),
                                           scheme="2bit"))
    assert all(r.passed and r.bound is None for r in rows)
    rows = run_experiment(ExperimentConfig(mode="adversary-sweep", k_values=(4, 10), explorers=("greedy", "dfs")))
    assert len(rows) == 4 and all(r.passed for r in rows)


def test_failed_rows_are_flagged():
    rows = run_experiment(ExperimentConfig(mode="fuzz-greedy", trials=3, i_range=(3, 5), j_range=(1, 2)))
    rows[0].passed = False
    assert rows_to_csv(rows).splitlines()[1].endswith(",false")


# -- cli ------------------------------------------------------------------------


@pytest.fixture
def heavy_file(tmp_path, heavy_t31):
    path = tmp_path / "heavy.txt"
    path.write_text(serialize_graph(heavy_t31))
    return path


def test_cli_oracle(heavy_file, capsys):
    assert main(["oracle", str(heavy_file)]) == 0
    assert capsys.readouterr().out.splitlines() == ["opt_closed_form,opt_brute_force,shape", "6/1,6/1,shape2"]


def test_cli_adversary(capsys):
    assert main(["adversary", "--explorer", "greedy", "--k", "4"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "explorer,k,case,t1,aux,explorer_cost,opt_cost,ratio,bound"
    assert lines[1] == "greedy,4,case1,0,0,18/1,11/1,18/11,18/11"


def test_cli_advice(heavy_file, capsys):
    assert main(["advice", "--scheme", "tadpole", str(heavy_file), "--start", "3"]) == 0
    header, row = capsys.readouterr().out.splitlines()
    assert header == "n,bits,advice,cost,opt,ratio"
    n, bits, advice, cost, opt, ratio = row.split(",")
    assert (n, bits, len(advice), cost, ratio) == ("4", "3", 3, "6/1", "1/1")


def test_cli_explore_with_trace(heavy_file, tmp_path, capsys):
    trace = tmp_path / "trace.csv"
    assert main(["explore", "--explorer", "dfs", str(heavy_file), "--start", "1", "--trace", str(trace)]) == 0
    assert capsys.readouterr().out.startswith("explorer,start,cost,opt,ratio\ndfs,1,")
    assert trace.read_text().startswith("step,from,to,weight,cumulative_cost\n1,1,0,1/1,1/1")


def test_cli_run_exit_status(tmp_path, capsys):
    good = tmp_path / "good.cfg"
    good.write_text(f"mode = oracle-check\ntrials = 3\ni = 3..5\nj = 1..2\noutput = {tmp_path / 'o.csv'}\n")
    assert main(["run", str(good)]) == 0
    assert (tmp_path / "o.csv").read_text().startswith(",".join(CSV_HEADER))


def test_cli_errors(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("v 2\ne 0 1 0/1\n")
    assert main(["oracle", str(bad)]) == 2
    assert "line 2" in capsys.readouterr().err
    assert main(["explore", str(bad).replace("bad", "missing"), "--start", "0"]) != 0
    assert main(["run", str(tmp_path / "none.cfg")]) == 2


def test_module_entry_point(heavy_file):
    out = subprocess.run([sys.executable, "-m", "tadpole_explore", "oracle", str(heavy_file)],
                         capture_output=True, text=True, check=True)
    assert out.stdout.splitlines()[1] == "6/1,6/1,shape2"
