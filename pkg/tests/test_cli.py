import pytest

from liquidrank.cli import main, parse_seeds

DEMO = """# tiny deterministic scenario
n_agents=10
days=10
seed=7
consumer_fraction=0.5
usage_mode=explicit-weighted
"""

BUNDLE_FILES = ("config.txt", "ratings.csv", "states.csv", "report.txt")


@pytest.fixture
def demo_config(tmp_path):
    path = tmp_path / "demo.cfg"
    path.write_text(DEMO)
    return path


def test_seed_list_syntax():
    assert parse_seeds("5") == (5,)
    assert parse_seeds("1..4") == (1, 2, 3, 4)
    assert parse_seeds("2,9,4") == (2, 9, 4)
    with pytest.raises(Exception):
        parse_seeds("1..")


def test_simulate_writes_byte_identical_bundles(tmp_path, demo_config):
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert main(["simulate", "--config", str(demo_config), "--out", str(out_a)]) == 0
    assert main(["simulate", "--config", str(demo_config), "--out", str(out_b)]) == 0
    for name in BUNDLE_FILES:
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes()


def test_simulate_seed_override_changes_output(tmp_path, demo_config):
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    main(["simulate", "--config", str(demo_config), "--out", str(out_a)])
    main(["simulate", "--config", str(demo_config), "--seed", "8", "--out", str(out_b)])
    assert (out_a / "ratings.csv").read_bytes() != (out_b / "ratings.csv").read_bytes()


def test_sweep_prints_cardinality_then_writes(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    code = main(["sweep", "--grid", "fig1", "--preset", "small", "--seeds", "1..2", "--out", str(out)])
    assert code == 0
    stdout = capsys.readouterr().out
    assert "9 cells x 2 seeds = 18 paired runs" in stdout
    assert stdout.index("cells") < stdout.index("wrote")
    assert out.exists()


def test_report_renders_table(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    main(["sweep", "--grid", "modes", "--preset", "small", "--seeds", "1", "--out", str(out)])
    capsys.readouterr()
    assert main(["report", str(out)]) == 0
    table = capsys.readouterr().out
    assert table.splitlines()[0].startswith("cell")
    assert len(table.splitlines()) == 10


def test_usage_errors_exit_1(capsys):
    assert main([]) == 1
    assert main(["simulate"]) == 1
    assert main(["frobnicate"]) == 1
    assert main(["sweep", "--preset", "tiny", "--out", "x.csv"]) == 1
    assert main(["sweep", "--seeds", "1..", "--out", "x.csv"]) == 1


def test_runtime_errors_exit_2(tmp_path, capsys):
    missing = tmp_path / "nope.cfg"
    assert main(["simulate", "--config", str(missing), "--out", str(tmp_path / "o")]) == 2

    bad = tmp_path / "bad.cfg"
    bad.write_text("n_agents=100\ndays=90\nseed=1\ncolour=blue\n")
    assert main(["simulate", "--config", str(bad), "--out", str(tmp_path / "o")]) == 2
    assert "unknown key" in capsys.readouterr().err

    out = tmp_path / "s.csv"
    assert main(["sweep", "--grid", "everything", "--out", str(out)]) == 2


def test_help_exits_0(capsys):
    assert main(["--help"]) == 0
    assert "simulate" in capsys.readouterr().out
